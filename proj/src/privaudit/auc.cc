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

#include "fedlora/privaudit/auc.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fedlora/common/error.h"

namespace fedlora::privaudit {

namespace {

void require_finite_scores(std::span<const AttackScore> scores) {
  for (const AttackScore& s : scores) {
    if (!std::isfinite(s.score)) {
      throw NumericError("attack score of sample " +
                         std::to_string(s.sample_id) + " is not finite");
    }
  }
}

// Indices of `scores` sorted by score, ties in sample_id order.
std::vector<std::size_t> sorted_order(std::span<const AttackScore> scores,
                                      bool descending) {
  std::vector<std::size_t> idx(scores.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t l, std::size_t r) {
    if (scores[l].score != scores[r].score) {
      return descending ? scores[l].score > scores[r].score
                        : scores[l].score < scores[r].score;
    }
    return scores[l].sample_id < scores[r].sample_id;
  });
  return idx;
}

}  // namespace

double roc_auc(std::span<const AttackScore> scores) {
  require_finite_scores(scores);
  std::size_t n_members = 0;
  for (const AttackScore& s : scores) n_members += s.is_member ? 1 : 0;
  const std::size_t n_nonmembers = scores.size() - n_members;
  if (n_members == 0 || n_nonmembers == 0) {
    throw ParamError("roc_auc: need at least one member and one non-member");
  }

  const std::vector<std::size_t> idx = sorted_order(scores, false);
  double member_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]].score == scores[idx[i]].score) ++j;
    // Positions i..j-1 share the average of the 1-based ranks i+1..j.
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (scores[idx[k]].is_member) member_rank_sum += avg_rank;
    }
    i = j;
  }
  const double nm = static_cast<double>(n_members);
  const double nn = static_cast<double>(n_nonmembers);
  return (member_rank_sum - nm * (nm + 1.0) / 2.0) / (nm * nn);
}

double pr_auc(std::span<const AttackScore> scores) {
  require_finite_scores(scores);
  std::size_t n_members = 0;
  for (const AttackScore& s : scores) n_members += s.is_member ? 1 : 0;
  if (n_members == 0) throw ParamError("pr_auc: need at least one member");

  const std::vector<std::size_t> idx = sorted_order(scores, true);
  double ap = 0.0;
  double prev_recall = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]].score == scores[idx[i]].score) {
      (scores[idx[j]].is_member ? tp : fp) += 1;
      ++j;
    }
    const double precision =
        static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall =
        static_cast<double>(tp) / static_cast<double>(n_members);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

}  // namespace fedlora::privaudit
