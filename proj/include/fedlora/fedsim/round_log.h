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

#ifndef FEDLORA_FEDSIM_ROUND_LOG_H_
#define FEDLORA_FEDSIM_ROUND_LOG_H_

#include <filesystem>
#include <string>
#include <vector>

#include "fedlora/fedsim/federation.h"

namespace fedlora::fedsim {

inline constexpr const char* kRoundLogHeader =
    "round,client_id,pre_clip_norm,post_clip_norm,sigma,mean_local_loss,"
    "wall_ms";

// One row per client per round under kRoundLogHeader.
std::string round_log_csv(const std::vector<RoundRecord>& history);

void write_round_log(const std::filesystem::path& path,
                     const std::vector<RoundRecord>& history);

}  // namespace fedlora::fedsim

#endif  // FEDLORA_FEDSIM_ROUND_LOG_H_
