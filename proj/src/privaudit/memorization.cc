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

#include "fedlora/privaudit/memorization.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "fedlora/common/error.h"
#include "fedlora/numkit/random.h"

namespace fedlora::privaudit {

namespace {

using WordCounts = std::map<std::string, std::size_t>;

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

WordCounts count_words(const TokenSeq& seq) {
  WordCounts counts;
  for (std::string& w : split_words(textdata::detokenize(seq))) {
    ++counts[std::move(w)];
  }
  return counts;
}

}  // namespace

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) words.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return words;
}

double rouge1_recall(const TokenSeq& generated, const TokenSeq& reference) {
  const WordCounts ref = count_words(reference);
  if (ref.empty()) throw ParamError("rouge1_recall: empty reference");
  const WordCounts gen = count_words(generated);
  std::size_t overlap = 0;
  std::size_t total = 0;
  for (const auto& [word, n] : ref) {
    total += n;
    auto it = gen.find(word);
    if (it != gen.end()) overlap += std::min(n, it->second);
  }
  return static_cast<double>(overlap) / static_cast<double>(total);
}

CosineResult cosine_sim(const TokenSeq& generated, const TokenSeq& reference) {
  const WordCounts gen = count_words(generated);
  const WordCounts ref = count_words(reference);
  if (gen.empty() || ref.empty()) return {0.0, true};
  double dot = 0.0;
  double gen_sq = 0.0;
  double ref_sq = 0.0;
  for (const auto& [word, n] : gen) {
    gen_sq += static_cast<double>(n * n);
    auto it = ref.find(word);
    if (it != ref.end()) dot += static_cast<double>(n * it->second);
  }
  for (const auto& [word, n] : ref) ref_sq += static_cast<double>(n * n);
  const double value = dot / (std::sqrt(gen_sq) * std::sqrt(ref_sq));
  return {std::clamp(value, 0.0, 1.0), false};
}

MemorizationReport memorization_eval(const BaseModel& base,
                                     const LoraAdapter& adapter,
                                     const std::vector<TokenSeq>& sequences,
                                     const MemorizationParams& params) {
  if (params.prompt_len == 0 || params.gen_len == 0) {
    throw ParamError("memorization_eval: prompt_len and gen_len must be >= 1");
  }
  if (params.n_samples == 0) {
    throw ParamError("memorization_eval: n_samples must be >= 1");
  }
  const std::size_t need = params.prompt_len + params.gen_len;

  MemorizationReport report;
  report.prompt_len = params.prompt_len;
  report.gen_len = params.gen_len;

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    const TokenSeq& seq = sequences[i];
    const bool long_enough = seq.size() >= need;
    if (long_enough &&
        !split_words(textdata::detokenize(TokenSeq(
                         seq.begin() + static_cast<std::ptrdiff_t>(params.prompt_len),
                         seq.begin() + static_cast<std::ptrdiff_t>(need))))
             .empty()) {
      eligible.push_back(i);
    } else {
      ++report.n_skipped;
    }
  }
  if (eligible.empty()) {
    throw DataError("memorization_eval: all " +
                    std::to_string(sequences.size()) +
                    " sequences skipped (need >= " + std::to_string(need) +
                    " tokens with words in the continuation)");
  }

  numkit::Rng rng(numkit::derive_stream(params.seed, 0, 0, "memorization"));
  for (std::size_t i = eligible.size(); i > 1; --i) {
    std::swap(eligible[i - 1], eligible[rng.uniform_index(i)]);
  }
  eligible.resize(std::min(eligible.size(), params.n_samples));
  // Evaluate in corpus order so the reduction order is fixed.
  std::sort(eligible.begin(), eligible.end());

  double recall_sum = 0.0;
  double cosine_sum = 0.0;
  for (std::size_t i : eligible) {
    const TokenSeq& seq = sequences[i];
    const auto p = static_cast<std::ptrdiff_t>(params.prompt_len);
    const auto end = static_cast<std::ptrdiff_t>(need);
    const TokenSeq prompt(seq.begin(), seq.begin() + p);
    const TokenSeq reference(seq.begin() + p, seq.begin() + end);
    const TokenSeq generated =
        loralm::greedy_generate(base, adapter, prompt, params.gen_len);
    recall_sum += rouge1_recall(generated, reference);
    cosine_sum += cosine_sim(generated, reference).value;
  }
  report.n_samples = eligible.size();
  const auto n = static_cast<double>(eligible.size());
  report.mean_rouge1_recall = recall_sum / n;
  report.mean_cosine = cosine_sum / n;
  return report;
}

}  // namespace fedlora::privaudit
