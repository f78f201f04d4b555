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

#ifndef FEDLORA_FEDSIM_CHECKPOINT_H_
#define FEDLORA_FEDSIM_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "fedlora/loralm/model.h"

namespace fedlora::fedsim {

// On-disk snapshot of the server state:
//   {"round": int, "config_digest": hex, "adapter": {"rank", "alpha",
//    "A": {"rows", "cols", "data"}, "B": {...}}, "base_seed": int}
// Doubles are written in shortest round-trip form, so loading restores the
// adapter bit for bit.
struct Checkpoint {
  int round = 0;
  std::string config_digest;
  loralm::LoraAdapter adapter;
  std::uint64_t base_seed = 0;
};

std::string checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const std::string& text);

void write_checkpoint(const std::filesystem::path& path,
                      const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace fedlora::fedsim

#endif  // FEDLORA_FEDSIM_CHECKPOINT_H_
