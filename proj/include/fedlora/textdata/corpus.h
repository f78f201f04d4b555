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

#ifndef FEDLORA_TEXTDATA_CORPUS_H_
#define FEDLORA_TEXTDATA_CORPUS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fedlora::textdata {

enum class Role { kSeeker, kSupporter };

std::string_view role_name(Role role);

struct Turn {
  Role role = Role::kSeeker;
  std::string text;

  bool operator==(const Turn&) const = default;
};

// One counseling conversation. Turns are non-empty and alternate roles
// starting with the seeker.
struct DialogueSession {
  std::string theme;
  std::vector<Turn> turns;

  bool operator==(const DialogueSession&) const = default;
};

// Throws DataError if the session breaks its invariants.
void validate_session(const DialogueSession& session);

// Reads a JSONL corpus: one {"theme": ..., "turns": [{"role", "text"}]}
// object per line, sessions returned in file order. Blank lines are skipped.
// Errors carry the 1-based line number.
std::vector<DialogueSession> load_corpus(const std::filesystem::path& path);

// Writes sessions in the same format, LF-terminated, keys in fixed order.
void write_corpus(const std::filesystem::path& path,
                  const std::vector<DialogueSession>& sessions);

std::string session_to_json_line(const DialogueSession& session);

bool is_valid_utf8(std::string_view text);

}  // namespace fedlora::textdata

#endif  // FEDLORA_TEXTDATA_CORPUS_H_
