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

#ifndef FEDLORA_TEXTDATA_TOKENIZER_H_
#define FEDLORA_TEXTDATA_TOKENIZER_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fedlora/textdata/corpus.h"

namespace fedlora::textdata {

// Byte-level vocabulary: every token is one UTF-8 byte.
using Token = std::uint8_t;
using TokenSeq = std::vector<Token>;

inline constexpr std::size_t kVocabSize = 256;
inline constexpr Token kPadToken = 0;

TokenSeq tokenize(std::string_view text);
std::string detokenize(const TokenSeq& tokens);

// Training text of a session: turn texts joined with single '\n' bytes.
std::string session_text(const DialogueSession& session);

// One next-token prediction event.
struct Example {
  std::vector<Token> window;  // `context` tokens, oldest first
  Token target = 0;

  bool operator==(const Example&) const = default;
};

// One example per position i: the `context` tokens before i, left-padded
// with kPadToken, predicting seq[i].
std::vector<Example> make_examples(const TokenSeq& seq, std::size_t context);

}  // namespace fedlora::textdata

#endif  // FEDLORA_TEXTDATA_TOKENIZER_H_
