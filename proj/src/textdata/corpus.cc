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

#include "fedlora/textdata/corpus.h"

#include <fstream>

#include "fedlora/common/error.h"
#include "json.hpp"

namespace fedlora::textdata {

namespace {

using nlohmann::json;

std::string at_line(std::size_t line) {
  return "corpus line " + std::to_string(line) + ": ";
}

const json& require_field(const json& obj, const char* name,
                          std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw DataError(at_line(line) + "missing field \"" + name + "\"");
  }
  return *it;
}

std::string require_string(const json& obj, const char* name,
                           std::size_t line) {
  const json& v = require_field(obj, name, line);
  if (!v.is_string()) {
    throw DataError(at_line(line) + "field \"" + name + "\" must be a string");
  }
  return v.get<std::string>();
}

DialogueSession parse_session(const std::string& text, std::size_t line) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(at_line(line) + "malformed JSON: " + e.what());
  }
  if (!obj.is_object()) throw DataError(at_line(line) + "expected an object");

  DialogueSession session;
  session.theme = require_string(obj, "theme", line);
  const json& turns = require_field(obj, "turns", line);
  if (!turns.is_array()) {
    throw DataError(at_line(line) + "field \"turns\" must be an array");
  }
  for (const json& t : turns) {
    if (!t.is_object()) {
      throw DataError(at_line(line) + "each turn must be an object");
    }
    const std::string role = require_string(t, "role", line);
    Turn turn;
    if (role == "seeker") {
      turn.role = Role::kSeeker;
    } else if (role == "supporter") {
      turn.role = Role::kSupporter;
    } else {
      throw DataError(at_line(line) + "unknown role \"" + role + "\"");
    }
    turn.text = require_string(t, "text", line);
    session.turns.push_back(std::move(turn));
  }
  try {
    validate_session(session);
  } catch (const DataError& e) {
    throw DataError(at_line(line) + e.what());
  }
  return session;
}

}  // namespace

std::string_view role_name(Role role) {
  return role == Role::kSeeker ? "seeker" : "supporter";
}

void validate_session(const DialogueSession& session) {
  if (!is_valid_utf8(session.theme)) throw DataError("theme is not UTF-8");
  if (session.turns.empty()) throw DataError("turns non-empty");
  for (std::size_t i = 0; i < session.turns.size(); ++i) {
    const Role expected = i % 2 == 0 ? Role::kSeeker : Role::kSupporter;
    if (session.turns[i].role != expected) {
      throw DataError("roles must alternate starting with seeker (turn " +
                      std::to_string(i) + ")");
    }
    if (!is_valid_utf8(session.turns[i].text)) {
      throw DataError("turn " + std::to_string(i) + " is not UTF-8");
    }
  }
}

std::vector<DialogueSession> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("corpus not found: " + path.string());
  std::vector<DialogueSession> sessions;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    sessions.push_back(parse_session(text, line));
  }
  return sessions;
}

std::string session_to_json_line(const DialogueSession& session) {
  json turns = json::array();
  for (const Turn& t : session.turns) {
    turns.push_back({{"role", role_name(t.role)}, {"text", t.text}});
  }
  json obj = {{"theme", session.theme}, {"turns", std::move(turns)}};
  return obj.dump();
}

void write_corpus(const std::filesystem::path& path,
                  const std::vector<DialogueSession>& sessions) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write corpus: " + path.string());
  for (const DialogueSession& s : sessions) {
    out << session_to_json_line(s) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

bool is_valid_utf8(std::string_view text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

}  // namespace fedlora::textdata
