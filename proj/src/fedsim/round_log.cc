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

#include "fedlora/fedsim/round_log.h"

#include <fstream>

#include "fedlora/common/format.h"

namespace fedlora::fedsim {

std::string round_log_csv(const std::vector<RoundRecord>& history) {
  std::string out = kRoundLogHeader;
  out += '\n';
  for (const RoundRecord& round : history) {
    for (const ClientRoundRecord& r : round.clients) {
      out += std::to_string(r.round) + ',' + std::to_string(r.client_id) +
             ',' + format_double(r.pre_clip_norm) + ',' +
             format_double(r.post_clip_norm) + ',' + format_double(r.sigma) +
             ',' + format_double(r.mean_local_loss) + ',' +
             format_double(r.wall_ms) + '\n';
    }
  }
  return out;
}

void write_round_log(const std::filesystem::path& path,
                     const std::vector<RoundRecord>& history) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write round log: " + path.string());
  out << round_log_csv(history);
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace fedlora::fedsim
