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

#ifndef FEDLORA_TESTS_SUPPORT_ORACLES_H_
#define FEDLORA_TESTS_SUPPORT_ORACLES_H_

// Independent reference implementations used to cross-check the library.
// They favour obviousness over speed.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedlora/loralm/model.h"
#include "fedlora/numkit/matrix.h"
#include "fedlora/privaudit/auc.h"

namespace fedlora::testing {

numkit::Matrix naive_matmul(const numkit::Matrix& a, const numkit::Matrix& b);

// Fraction of (member, non-member) pairs the member wins, ties counting 1/2.
double pair_count_auc(std::span<const privaudit::AttackScore> scores);

// Average precision from scratch: for each distinct threshold t (descending)
// count TP/FP over all samples with score >= t.
double threshold_scan_ap(std::span<const privaudit::AttackScore> scores);

// FedAvg in 50-digit arithmetic, rounded to double at the end.
loralm::LoraAdapter extended_weighted_mean(
    std::span<const loralm::LoraAdapter> params,
    std::span<const std::size_t> sample_counts);

// Mean cross-entropy of a batch computed from forward() probabilities.
double batch_loss(const loralm::BaseModel& base,
                  const loralm::LoraAdapter& adapter,
                  std::span<const textdata::Example> batch);

// Central differences of batch_loss on every entry of A and B.
loralm::GradPair finite_difference_grads(const loralm::BaseModel& base,
                                         const loralm::LoraAdapter& adapter,
                                         std::span<const textdata::Example> batch,
                                         double step);

// A small random model with non-zero B, so every gradient path is live.
std::pair<loralm::BaseModel, loralm::LoraAdapter> random_small_model(
    std::uint64_t seed, std::size_t k, std::size_t r, std::size_t context);

// Random next-token examples with tokens drawn from [0, vocab).
std::vector<textdata::Example> random_batch(std::uint64_t seed, std::size_t n,
                                            std::size_t context,
                                            std::size_t vocab = 256);

// Texts in which, past the first `prompt_len` bytes, the multiset of the
// previous `context` bytes (left-padded with byte 0) always determines the
// next byte, across all texts. A mean-of-embeddings model can therefore
// reproduce every continuation exactly once it fits the data. Words are
// made of distinct ASCII letters and separated by single spaces; each text
// ends on a whole word, at `length` bytes or a few more.
std::vector<std::string> distinct_window_texts(std::uint64_t seed, std::size_t n,
                                               std::size_t length,
                                               std::size_t context,
                                               std::size_t prompt_len);

// Mean pairwise Jaccard similarity of byte-bigram sets between texts of
// group a and texts of group b.
double mean_cross_bigram_jaccard(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b);

}  // namespace fedlora::testing

#endif  // FEDLORA_TESTS_SUPPORT_ORACLES_H_
