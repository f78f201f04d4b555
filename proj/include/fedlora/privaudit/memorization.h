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

#ifndef FEDLORA_PRIVAUDIT_MEMORIZATION_H_
#define FEDLORA_PRIVAUDIT_MEMORIZATION_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fedlora/loralm/model.h"

namespace fedlora::privaudit {

using loralm::BaseModel;
using loralm::LoraAdapter;
using textdata::TokenSeq;

// Whitespace-delimited words of the byte string.
std::vector<std::string> split_words(std::string_view text);

// ROUGE-1 recall over words of the detokenized texts:
// sum_w min(gen(w), ref(w)) / sum_w ref(w). The reference must contain at
// least one word.
double rouge1_recall(const TokenSeq& generated, const TokenSeq& reference);

struct CosineResult {
  double value = 0.0;
  bool degenerate = false;  // one side had no words; value is 0
};

// Cosine of the word count vectors of the two texts.
CosineResult cosine_sim(const TokenSeq& generated, const TokenSeq& reference);

struct MemorizationParams {
  std::size_t prompt_len = 32;
  std::size_t gen_len = 64;
  std::size_t n_samples = 64;
  std::uint64_t seed = 0;
};

struct MemorizationReport {
  double mean_rouge1_recall = 0.0;
  double mean_cosine = 0.0;
  std::size_t prompt_len = 0;
  std::size_t gen_len = 0;
  std::size_t n_samples = 0;  // sequences actually evaluated
  std::size_t n_skipped = 0;  // too short, or no words in the continuation
};

// Prompts the model with the first prompt_len tokens of up to n_samples
// training sequences (seeded subsample), decodes gen_len tokens greedily and
// compares them with the true continuation. Throws DataError if no sequence
// is usable.
MemorizationReport memorization_eval(const BaseModel& base,
                                     const LoraAdapter& adapter,
                                     const std::vector<TokenSeq>& sequences,
                                     const MemorizationParams& params);

}  // namespace fedlora::privaudit

#endif  // FEDLORA_PRIVAUDIT_MEMORIZATION_H_
