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

#include "fedlora/numkit/softmax.h"

#include <algorithm>
#include <cmath>

#include "fedlora/common/error.h"
#include "fedlora/numkit/matrix.h"

namespace fedlora::numkit {

namespace {

double max_of(std::span<const double> logits) {
  if (logits.empty()) throw ParamError("softmax: empty logit vector");
  check_finite(logits, "softmax logits");
  return *std::max_element(logits.begin(), logits.end());
}

}  // namespace

std::vector<double> softmax(std::span<const double> logits) {
  const double mx = max_of(logits);
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> log_softmax(std::span<const double> logits) {
  const double mx = max_of(logits);
  double total = 0.0;
  for (double x : logits) total += std::exp(x - mx);
  const double log_total = std::log(total);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = (logits[i] - mx) - log_total;
  }
  return out;
}

}  // namespace fedlora::numkit
