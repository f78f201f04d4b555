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

#ifndef FEDLORA_EXPCLI_CONFIG_H_
#define FEDLORA_EXPCLI_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fedlora/fedsim/federation.h"
#include "fedlora/loralm/model.h"
#include "fedlora/privaudit/attacks.h"
#include "fedlora/privaudit/memorization.h"
#include "fedlora/textdata/synthetic.h"

namespace fedlora::expcli {

inline constexpr const char* kOutputDirEnv = "FEDLORA_OUTPUT_DIR";

struct SyntheticSpec {
  std::uint64_t seed = 0;
  std::size_t n_sessions = 60;
  std::vector<std::string> themes = {"anxiety", "grief"};
  textdata::LengthRange length_range;
};

// Exactly one of the two is set.
struct CorpusSpec {
  std::optional<std::filesystem::path> path;
  std::optional<SyntheticSpec> synthetic;
};

// Where non-members come from. kHoldout reserves holdout_fraction of every
// theme before sharding; kShards splits the corpus into 2N theme shards,
// trains on the first N and uses the rest.
enum class NonMemberMode { kHoldout, kShards };

// nullopt is the non-private baseline.
using EpsilonEntry = std::optional<double>;

struct ExperimentConfig {
  // privacy.enabled/epsilon are ignored here; each grid entry sets them.
  fedsim::FederationConfig federation;
  loralm::ModelConfig model;
  CorpusSpec corpus{std::nullopt, SyntheticSpec{}};
  std::vector<EpsilonEntry> epsilon_grid = {1.0, 3.0, 5.0, 7.0, std::nullopt};
  std::vector<privaudit::AttackKind> attacks = {privaudit::AttackKind::kLoss,
                                                privaudit::AttackKind::kMinK,
                                                privaudit::AttackKind::kZlib};
  double mink_k = 20.0;
  // Members and non-members are subsampled to a common size:
  // min(|members|, |nonmembers|), further capped here when non-zero.
  std::size_t mia_per_class = 0;
  privaudit::MemorizationParams memorization;  // seed follows federation.seed
  std::size_t eval_every = 5;
  std::filesystem::path output_dir = "fedlora_out";
  NonMemberMode nonmembers = NonMemberMode::kHoldout;
  double holdout_fraction = 0.2;
};

void validate(const ExperimentConfig& cfg);

// Strict: unknown keys and wrong types are ParamErrors naming the key.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Applies FEDLORA_OUTPUT_DIR when set and non-empty.
void apply_env_overrides(ExperimentConfig& cfg);

// Every field, defaults filled in. Round-trips through config_from_json_text.
std::string config_to_json_text(const ExperimentConfig& cfg);

// 16 hex digits over the fields that affect results. Output location and
// execution knobs (parallel_clients, record_wall_time) are left out, so a
// parallel rerun elsewhere produces the same file names and contents.
std::string config_digest(const ExperimentConfig& cfg);

// Digest of one grid point's training run.
std::string run_digest(const ExperimentConfig& cfg, EpsilonEntry epsilon);

// "1", "0.5", "none".
std::string epsilon_label(EpsilonEntry epsilon);

// Federation config of one grid point.
fedsim::FederationConfig run_federation(const ExperimentConfig& cfg,
                                        EpsilonEntry epsilon);

}  // namespace fedlora::expcli

#endif  // FEDLORA_EXPCLI_CONFIG_H_
