// Copyright 2026 The FedLoRA Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDLORA_NUMKIT_RANDOM_H_
#define FEDLORA_NUMKIT_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "fedlora/numkit/matrix.h"

namespace fedlora::numkit {

// FNV-1a over raw bytes. Stable across platforms; used for stream
// derivation, content hashes and config digests.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Identity of one deterministic random stream.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  bool operator==(const RngState&) const = default;
};

// stream_id for (global seed, client, round, tensor tag). Every consumer of
// randomness in the simulator derives its stream through this function.
std::uint64_t derive_stream_id(std::uint64_t global_seed,
                               std::uint64_t client_id, std::uint64_t round,
                               std::string_view tag);

inline RngState derive_stream(std::uint64_t global_seed,
                              std::uint64_t client_id, std::uint64_t round,
                              std::string_view tag) {
  return {global_seed, derive_stream_id(global_seed, client_id, round, tag)};
}

// Counter-based generator: the i-th 64-bit output is mix64(key + i*gamma)
// where key is fixed by (seed, stream_id). Gaussians use the Box-Muller
// transform, consuming two uniforms per pair of normals.
class Rng {
 public:
  explicit Rng(RngState state);

  const RngState& state() const { return state_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);
  // Standard normal.
  double gaussian();

 private:
  RngState state_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_;
};

// i.i.d. N(0, sigma^2) entries, drawn in row-major order. sigma == 0 gives
// the zero matrix without consuming randomness.
Matrix sample_gaussian(Rng& rng, std::size_t rows, std::size_t cols,
                       double sigma);

}  // namespace fedlora::numkit

#endif  // FEDLORA_NUMKIT_RANDOM_H_
