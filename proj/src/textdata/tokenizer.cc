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

#include "fedlora/textdata/tokenizer.h"

#include <algorithm>

#include "fedlora/common/error.h"

namespace fedlora::textdata {

TokenSeq tokenize(std::string_view text) {
  TokenSeq out;
  out.reserve(text.size());
  for (char c : text) out.push_back(static_cast<Token>(c));
  return out;
}

std::string detokenize(const TokenSeq& tokens) {
  std::string out;
  out.reserve(tokens.size());
  for (Token t : tokens) out.push_back(static_cast<char>(t));
  return out;
}

std::string session_text(const DialogueSession& session) {
  std::string out;
  for (std::size_t i = 0; i < session.turns.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += session.turns[i].text;
  }
  return out;
}

std::vector<Example> make_examples(const TokenSeq& seq, std::size_t context) {
  if (context == 0) throw ParamError("make_examples: context must be >= 1");
  std::vector<Example> out;
  out.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    Example ex;
    ex.window.assign(context, kPadToken);
    const std::size_t have = std::min(i, context);
    for (std::size_t j = 0; j < have; ++j) {
      ex.window[context - have + j] = seq[i - have + j];
    }
    ex.target = seq[i];
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace fedlora::textdata
