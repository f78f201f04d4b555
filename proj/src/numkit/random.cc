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

#include "fedlora/numkit/random.h"

#include <cmath>
#include <numbers>
#include <string>

#include "fedlora/common/error.h"

namespace fedlora::numkit {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t hash_u64(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ mix64(v + kGamma));
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream_id(std::uint64_t global_seed,
                               std::uint64_t client_id, std::uint64_t round,
                               std::string_view tag) {
  std::uint64_t h = mix64(global_seed);
  h = hash_u64(h, client_id);
  h = hash_u64(h, round);
  h = hash_u64(h, fnv1a64(tag));
  return h;
}

Rng::Rng(RngState state)
    : state_(state), key_(hash_u64(mix64(state.seed), state.stream_id)) {}

std::uint64_t Rng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw ParamError("uniform_index: n must be positive");
  // Multiply-shift; the bias is below 2^-64 * n and irrelevant here.
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(next_u64()) * n;
  return static_cast<std::uint64_t>(wide >> 64);
}

double Rng::gaussian() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

Matrix sample_gaussian(Rng& rng, std::size_t rows, std::size_t cols,
                       double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ParamError("sample_gaussian: sigma must be finite and >= 0, got " +
                     std::to_string(sigma));
  }
  Matrix out(rows, cols);
  if (sigma == 0.0) return out;
  for (double& v : out.data()) v = sigma * rng.gaussian();
  return out;
}

}  // namespace fedlora::numkit
