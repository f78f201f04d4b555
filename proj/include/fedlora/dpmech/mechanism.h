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

#ifndef FEDLORA_DPMECH_MECHANISM_H_
#define FEDLORA_DPMECH_MECHANISM_H_

#include <cstddef>
#include <cstdint>

#include "fedlora/loralm/model.h"
#include "fedlora/numkit/matrix.h"

namespace fedlora::dpmech {

using loralm::LoraAdapter;
using numkit::Matrix;

// Client-level Gaussian mechanism applied to one round update.
//
// When `enabled` is false both clipping and noise are skipped, which is the
// non-private baseline. `sigma` is derived by gaussian(); it is a plain field
// so tests can pin it (e.g. to 0) after construction.
struct PrivacyParams {
  bool enabled = false;
  double epsilon = 1.0;
  double delta = 1e-5;
  double clip_norm = 1.0;    // C
  double sensitivity = 1.0;  // S
  double sigma = 0.0;

  static PrivacyParams disabled() { return {}; }
  // Validates every field and sets sigma = calibrate_sigma(...).
  static PrivacyParams gaussian(double epsilon, double delta = 1e-5,
                                double clip_norm = 1.0,
                                double sensitivity = 1.0);
};

// Range checks; a disabled configuration is always valid.
void validate(const PrivacyParams& params);

// sigma = S * sqrt(2 ln(1.25 / delta)) / epsilon.
//
// The classical guarantee behind this formula assumes epsilon <= 1. Larger
// budgets are accepted and use the same formula.
double calibrate_sigma(double epsilon, double delta, double sensitivity);

// Delta of one client for one round, plus its FedAvg weight |D_i|.
struct ClientUpdate {
  int client_id = 0;
  int round = 0;
  Matrix da;
  Matrix db;
  std::size_t sample_count = 0;
};

// local - global, tensor by tensor.
ClientUpdate make_update(const LoraAdapter& local, const LoraAdapter& global,
                         int client_id, int round, std::size_t sample_count);

// Joint L2 norm of dA and dB.
double update_norm(const ClientUpdate& update);

// Scales dA and dB together by min(1, C / ||(dA, dB)||). Updates already
// inside the ball, including the zero update, are returned unchanged.
ClientUpdate clip_update(const ClientUpdate& update, double clip_norm);

// Clip, then add N(0, sigma^2) independently to every entry of dA and dB.
// Each tensor draws from its own stream derived from
// (seed, client_id, round, tensor tag).
ClientUpdate privatize(const ClientUpdate& update, const PrivacyParams& params,
                       std::uint64_t seed);

// theta~ = global + delta~.
LoraAdapter apply_to_global(const LoraAdapter& global,
                            const ClientUpdate& update);

}  // namespace fedlora::dpmech

#endif  // FEDLORA_DPMECH_MECHANISM_H_
