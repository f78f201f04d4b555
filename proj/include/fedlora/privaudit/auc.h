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

#ifndef FEDLORA_PRIVAUDIT_AUC_H_
#define FEDLORA_PRIVAUDIT_AUC_H_

#include <cstdint>
#include <span>

namespace fedlora::privaudit {

// One scored sample. Every attack orients scores so that higher means
// "more likely a member".
struct AttackScore {
  std::int64_t sample_id = 0;
  bool is_member = false;
  double score = 0.0;
};

// Mann-Whitney AUC with average ranks for ties, i.e.
// P(member > non-member) + P(tie) / 2. Needs both classes present.
double roc_auc(std::span<const AttackScore> scores);

// Average precision. Distinct score values are visited in descending order;
// each tie group contributes (R_j - R_{j-1}) * P_j. Needs at least one
// member.
double pr_auc(std::span<const AttackScore> scores);

}  // namespace fedlora::privaudit

#endif  // FEDLORA_PRIVAUDIT_AUC_H_
