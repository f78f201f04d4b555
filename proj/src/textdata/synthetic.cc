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

#include "fedlora/textdata/synthetic.h"

#include <algorithm>
#include <set>

#include "fedlora/common/error.h"
#include "fedlora/numkit/random.h"

namespace fedlora::textdata {

namespace {

struct ThemeFamily {
  std::string alphabet;
  std::vector<std::string> words;
};

ThemeFamily make_family(std::uint64_t seed, std::size_t theme_index,
                        const std::string& theme, const SyntheticStyle& style) {
  numkit::Rng rng(
      numkit::derive_stream(seed, theme_index, 0, "synthetic:family:" + theme));
  std::string letters = "abcdefghijklmnopqrstuvwxyz";
  for (std::size_t i = 0; i < style.alphabet_size; ++i) {
    std::swap(letters[i], letters[i + rng.uniform_index(letters.size() - i)]);
  }
  ThemeFamily family;
  family.alphabet = letters.substr(0, style.alphabet_size);
  family.words.reserve(style.vocabulary_size);
  for (std::size_t w = 0; w < style.vocabulary_size; ++w) {
    // Letters are distinct within a word.
    const std::size_t len =
        std::min<std::size_t>(2 + rng.uniform_index(5), style.alphabet_size);
    std::string pool = family.alphabet;
    for (std::size_t k = 0; k < len; ++k) {
      std::swap(pool[k], pool[k + rng.uniform_index(pool.size() - k)]);
    }
    family.words.push_back(pool.substr(0, len));
  }
  return family;
}

// Skewed toward low indices so that a few words are common and many are
// rare.
const std::string& draw_word(numkit::Rng& rng, const ThemeFamily& family) {
  const double u = rng.uniform();
  const auto idx = static_cast<std::size_t>(
      u * u * static_cast<double>(family.words.size()));
  return family.words[idx];
}

std::string make_turn(numkit::Rng& rng, const ThemeFamily& family,
                      const LengthRange& lengths) {
  const std::size_t target =
      lengths.min + rng.uniform_index(lengths.max - lengths.min + 1);
  std::string text;
  while (text.size() < target) {
    if (!text.empty()) text.push_back(' ');
    text += draw_word(rng, family);
  }
  text.resize(target);
  // A trailing space would vanish under whitespace tokenization.
  if (text.back() == ' ') text.back() = family.alphabet[0];
  return text;
}

}  // namespace

std::vector<DialogueSession> gen_synthetic_corpus(
    std::uint64_t seed, std::size_t n_sessions,
    const std::vector<std::string>& themes, LengthRange lengths,
    const SyntheticStyle& style) {
  if (themes.empty()) throw ParamError("gen_synthetic_corpus: themes must be non-empty");
  if (n_sessions == 0) throw ParamError("gen_synthetic_corpus: n_sessions must be >= 1");
  if (lengths.min == 0 || lengths.min > lengths.max) {
    throw ParamError("gen_synthetic_corpus: length_range must satisfy 1 <= min <= max");
  }
  if (style.alphabet_size == 0 || style.alphabet_size > 26 ||
      style.vocabulary_size == 0 || style.min_turns == 0 ||
      style.min_turns > style.max_turns) {
    throw ParamError("gen_synthetic_corpus: invalid style");
  }
  std::set<std::string> distinct;
  for (const std::string& t : themes) {
    if (t.empty()) throw ParamError("gen_synthetic_corpus: empty theme name");
    if (!is_valid_utf8(t)) throw ParamError("gen_synthetic_corpus: theme is not UTF-8");
    if (!distinct.insert(t).second) {
      throw ParamError("gen_synthetic_corpus: duplicate theme \"" + t + "\"");
    }
  }

  std::vector<ThemeFamily> families;
  for (std::size_t i = 0; i < themes.size(); ++i) {
    families.push_back(make_family(seed, i, themes[i], style));
  }

  std::vector<DialogueSession> sessions;
  sessions.reserve(n_sessions);
  for (std::size_t i = 0; i < n_sessions; ++i) {
    const std::size_t t = i % themes.size();
    numkit::Rng rng(numkit::derive_stream(seed, t, i, "synthetic:session"));
    DialogueSession session;
    session.theme = themes[t];
    const std::size_t n_turns =
        style.min_turns +
        rng.uniform_index(style.max_turns - style.min_turns + 1);
    for (std::size_t k = 0; k < n_turns; ++k) {
      session.turns.push_back(
          {k % 2 == 0 ? Role::kSeeker : Role::kSupporter,
           make_turn(rng, families[t], lengths)});
    }
    sessions.push_back(std::move(session));
  }
  return sessions;
}

}  // namespace fedlora::textdata
