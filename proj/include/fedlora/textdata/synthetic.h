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

#ifndef FEDLORA_TEXTDATA_SYNTHETIC_H_
#define FEDLORA_TEXTDATA_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fedlora/textdata/corpus.h"

namespace fedlora::textdata {

// Inclusive byte-length bounds for one generated turn.
struct LengthRange {
  std::size_t min = 24;
  std::size_t max = 48;
};

// Knobs of the generator that are not part of its public contract.
struct SyntheticStyle {
  std::size_t alphabet_size = 20;   // letters available to one theme
  std::size_t vocabulary_size = 60;  // pseudo-words per theme
  std::size_t min_turns = 2;
  std::size_t max_turns = 4;
};

// Deterministic stand-in corpus. Session i belongs to theme i mod |themes|.
// Every theme draws its words from its own letter alphabet and its own skewed
// word vocabulary, so sessions of different themes share few byte bigrams
// while sessions of one theme look alike. Letters never repeat inside a word,
// which keeps words recognisable to a bag-of-context model.
std::vector<DialogueSession> gen_synthetic_corpus(
    std::uint64_t seed, std::size_t n_sessions,
    const std::vector<std::string>& themes, LengthRange lengths = {},
    const SyntheticStyle& style = {});

}  // namespace fedlora::textdata

#endif  // FEDLORA_TEXTDATA_SYNTHETIC_H_
