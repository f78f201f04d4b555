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

#ifndef FEDLORA_TEXTDATA_SHARDING_H_
#define FEDLORA_TEXTDATA_SHARDING_H_

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "fedlora/textdata/corpus.h"
#include "fedlora/textdata/tokenizer.h"

namespace fedlora::textdata {

// One client's private training data.
struct ClientShard {
  int client_id = 0;
  std::set<std::string> themes;
  std::vector<TokenSeq> sequences;

  // |D_i|, the FedAvg weight numerator.
  std::size_t sample_count() const { return sequences.size(); }
};

// Themes are sorted lexicographically and dealt to clients round-robin
// (theme j -> client j mod n_clients). Each session becomes one TokenSeq of
// its session_text(), appended in input order. Throws ParamError for
// n_clients == 0 or no sessions, DataError("empty shard ...") when a client
// would receive no sessions.
std::vector<ClientShard> shard_by_theme(
    const std::vector<DialogueSession>& sessions, std::size_t n_clients);

struct HoldoutSplit {
  std::vector<DialogueSession> train;
  std::vector<DialogueSession> heldout;
};

// Reserves floor(fraction * n_theme) sessions of every theme, chosen by a
// seeded shuffle, as held-out data. Both halves keep the input order.
HoldoutSplit split_holdout(const std::vector<DialogueSession>& sessions,
                           double fraction, std::uint64_t seed);

}  // namespace fedlora::textdata

#endif  // FEDLORA_TEXTDATA_SHARDING_H_
