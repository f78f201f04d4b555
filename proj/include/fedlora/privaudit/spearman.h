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

#ifndef FEDLORA_PRIVAUDIT_SPEARMAN_H_
#define FEDLORA_PRIVAUDIT_SPEARMAN_H_

#include <cstddef>
#include <span>
#include <vector>

namespace fedlora::privaudit {

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// 1-based ranks, tied values sharing the average of their ranks.
std::vector<double> average_ranks(std::span<const double> values);

// Spearman's rho as the Pearson correlation of average ranks. The two-sided
// p-value uses t = rho * sqrt((n - 2) / (1 - rho^2)) against Student's t with
// n - 2 degrees of freedom; |rho| == 1 gives p = 0.
//
// Requires equal lengths, n >= 3 and non-constant inputs.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

}  // namespace fedlora::privaudit

#endif  // FEDLORA_PRIVAUDIT_SPEARMAN_H_
