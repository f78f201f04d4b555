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

#include "fedlora/fedsim/checkpoint.h"

#include <fstream>
#include <sstream>

#include "fedlora/common/error.h"
#include "json.hpp"

namespace fedlora::fedsim {

namespace {

using nlohmann::ordered_json;

ordered_json matrix_to_json(const numkit::Matrix& m) {
  ordered_json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::vector<double>(m.data().begin(), m.data().end());
  return j;
}

numkit::Matrix matrix_from_json(const ordered_json& j, const char* name) {
  try {
    return numkit::Matrix(j.at("rows").get<std::size_t>(),
                          j.at("cols").get<std::size_t>(),
                          j.at("data").get<std::vector<double>>());
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("checkpoint: bad matrix \"") + name +
                    "\": " + e.what());
  } catch (const ShapeError& e) {
    throw DataError(std::string("checkpoint: bad matrix \"") + name +
                    "\": " + e.what());
  }
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& ckpt) {
  ordered_json j;
  j["round"] = ckpt.round;
  j["config_digest"] = ckpt.config_digest;
  ordered_json adapter;
  adapter["rank"] = ckpt.adapter.rank();
  adapter["alpha"] = ckpt.adapter.alpha;
  adapter["A"] = matrix_to_json(ckpt.adapter.a);
  adapter["B"] = matrix_to_json(ckpt.adapter.b);
  j["adapter"] = std::move(adapter);
  j["base_seed"] = ckpt.base_seed;
  return j.dump() + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw DataError(std::string("checkpoint: malformed JSON: ") + e.what());
  }
  Checkpoint ckpt;
  try {
    ckpt.round = j.at("round").get<int>();
    ckpt.config_digest = j.at("config_digest").get<std::string>();
    ckpt.base_seed = j.at("base_seed").get<std::uint64_t>();
    const ordered_json& a = j.at("adapter");
    ckpt.adapter.alpha = a.at("alpha").get<double>();
    ckpt.adapter.a = matrix_from_json(a.at("A"), "A");
    ckpt.adapter.b = matrix_from_json(a.at("B"), "B");
    if (a.at("rank").get<std::size_t>() != ckpt.adapter.rank() ||
        ckpt.adapter.b.cols() != ckpt.adapter.rank()) {
      throw DataError("checkpoint: rank disagrees with A/B shapes");
    }
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
  return ckpt;
}

void write_checkpoint(const std::filesystem::path& path,
                      const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint: " + path.string());
  out << checkpoint_to_json(ckpt);
  if (!out) throw IoError("write failed: " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("checkpoint not found: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_json(buf.str());
}

}  // namespace fedlora::fedsim
