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

#include "fedlora/textdata/sharding.h"

#include <cmath>
#include <map>
#include <numeric>

#include "fedlora/common/error.h"
#include "fedlora/numkit/random.h"

namespace fedlora::textdata {

std::vector<ClientShard> shard_by_theme(
    const std::vector<DialogueSession>& sessions, std::size_t n_clients) {
  if (n_clients == 0) throw ParamError("shard_by_theme: n_clients must be >= 1");
  if (sessions.empty()) throw ParamError("shard_by_theme: no sessions");

  std::set<std::string> themes;
  for (const DialogueSession& s : sessions) themes.insert(s.theme);

  std::vector<ClientShard> shards(n_clients);
  std::map<std::string, std::size_t> owner;
  std::size_t j = 0;
  for (const std::string& theme : themes) {
    owner[theme] = j % n_clients;
    shards[j % n_clients].themes.insert(theme);
    ++j;
  }
  for (std::size_t i = 0; i < n_clients; ++i) {
    shards[i].client_id = static_cast<int>(i);
  }
  for (const DialogueSession& s : sessions) {
    shards[owner.at(s.theme)].sequences.push_back(tokenize(session_text(s)));
  }
  for (const ClientShard& shard : shards) {
    if (shard.sequences.empty()) {
      throw DataError("empty shard: client " +
                      std::to_string(shard.client_id) + " of " +
                      std::to_string(n_clients) + " received no sessions (" +
                      std::to_string(themes.size()) + " themes)");
    }
  }
  return shards;
}

HoldoutSplit split_holdout(const std::vector<DialogueSession>& sessions,
                           double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw ParamError("split_holdout: fraction must be in [0, 1)");
  }
  std::map<std::string, std::vector<std::size_t>> by_theme;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    by_theme[sessions[i].theme].push_back(i);
  }
  std::vector<bool> held(sessions.size(), false);
  for (const auto& [theme, members] : by_theme) {
    std::vector<std::size_t> order = members;
    numkit::Rng rng(numkit::RngState{
        seed, numkit::derive_stream_id(seed, 0, 0, "holdout:" + theme)});
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
    const auto n_held = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(order.size())));
    for (std::size_t k = 0; k < n_held; ++k) held[order[k]] = true;
  }
  HoldoutSplit split;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    (held[i] ? split.heldout : split.train).push_back(sessions[i]);
  }
  return split;
}

}  // namespace fedlora::textdata
