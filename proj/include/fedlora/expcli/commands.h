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

#ifndef FEDLORA_EXPCLI_COMMANDS_H_
#define FEDLORA_EXPCLI_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fedlora/expcli/config.h"
#include "fedlora/fedsim/checkpoint.h"
#include "fedlora/privaudit/attacks.h"
#include "fedlora/privaudit/memorization.h"
#include "fedlora/privaudit/spearman.h"
#include "fedlora/textdata/corpus.h"
#include "fedlora/textdata/sharding.h"

namespace fedlora::expcli {

// Output layout under cfg.output_dir:
//   eps-<label>/checkpoint-<run digest>-r<round>.json
//   eps-<label>/rounds-<run digest>.csv
//   attack-<digest>.{json,csv}
//   memorization-<digest>.{json,csv}
//   report-<digest>.{json,csv}
std::filesystem::path run_dir(const ExperimentConfig& cfg, EpsilonEntry epsilon);
std::filesystem::path checkpoint_path(const ExperimentConfig& cfg,
                                      EpsilonEntry epsilon, int round);
std::filesystem::path round_log_path(const ExperimentConfig& cfg,
                                     EpsilonEntry epsilon);
std::filesystem::path sweep_path(const ExperimentConfig& cfg,
                                 const std::string& kind,
                                 const std::string& extension);

// Rounds at which cmd_train writes checkpoints: 0, eval_every, 2 eval_every,
// ... and the final round.
std::vector<int> checkpoint_rounds(const ExperimentConfig& cfg);

std::vector<textdata::DialogueSession> load_sessions(const ExperimentConfig& cfg);

struct ExperimentData {
  std::vector<textdata::ClientShard> shards;  // one per training client
  std::vector<textdata::TokenSeq> members;    // all training sequences
  std::vector<textdata::TokenSeq> nonmembers;
};

// The same split for every command and grid point, seeded by
// federation.seed.
ExperimentData prepare_data(const ExperimentConfig& cfg);

struct SynthSummary {
  std::filesystem::path path;
  std::size_t n_sessions = 0;
  std::size_t n_themes = 0;
};

// Requires a synthetic corpus spec. Writes to `out`, or to
// output_dir/corpus-<digest>.jsonl when `out` is empty.
SynthSummary cmd_synth(const ExperimentConfig& cfg,
                       const std::filesystem::path& out = {});

struct TrainSummary {
  EpsilonEntry epsilon;
  std::string run_digest;
  double final_mean_loss = 0.0;  // mean over clients, last round
  std::vector<std::filesystem::path> files;
};

// One independent federation per grid entry, all from the same data split
// and initial model.
std::vector<TrainSummary> cmd_train(const ExperimentConfig& cfg);

// Reads a checkpoint of cmd_train and checks it belongs to this config.
fedsim::Checkpoint load_run_checkpoint(const ExperimentConfig& cfg,
                                       EpsilonEntry epsilon, int round);

struct AttackRow {
  EpsilonEntry epsilon;
  int round = 0;
  privaudit::AucReport report;
};

struct MemorizationRow {
  EpsilonEntry epsilon;
  int round = 0;
  privaudit::MemorizationReport report;
};

struct SweepReport {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::vector<AttackRow> attacks;            // grid order, round, attack order
  std::vector<MemorizationRow> memorization;  // grid order
};

// Every (grid entry, checkpoint round, attack). Writes attack-<digest>.*.
SweepReport cmd_attack(const ExperimentConfig& cfg);

// Final checkpoint of every grid entry. Writes memorization-<digest>.*.
SweepReport cmd_memorize(const ExperimentConfig& cfg);

std::string attack_rows_json(const SweepReport& report);
std::string attack_rows_csv(const SweepReport& report);
std::string memorization_rows_json(const SweepReport& report);
std::string memorization_rows_csv(const SweepReport& report);
SweepReport parse_attack_rows_json(const std::string& text);
SweepReport parse_memorization_rows_json(const std::string& text);

struct ReportRow {
  EpsilonEntry epsilon;
  int round = 0;
  privaudit::AttackKind attack = privaudit::AttackKind::kLoss;
  double roc_auc = 0.0;
  double pr_auc = 0.0;
  std::optional<double> mean_rouge1_recall;
  std::optional<double> mean_cosine;
};

// Final-round summary per (grid entry, attack) from the files written by
// cmd_attack and, when present, cmd_memorize. Writes report-<digest>.*.
std::vector<ReportRow> cmd_report(const ExperimentConfig& cfg);
std::string report_csv(const std::vector<ReportRow>& rows);

struct SpearmanRow {
  std::string dimension;
  privaudit::SpearmanResult result;
};

// Paired columns "<dim>_auto" and "<dim>_human", one data row per rated
// item; other columns (such as a name column) are ignored.
std::vector<SpearmanRow> spearman_from_csv(const std::string& text);
std::vector<SpearmanRow> spearman_builtin();

// `csv` empty: the built-in rating table. When out_dir is non-empty the
// table is also written to out_dir/spearman-<input digest>.csv.
std::vector<SpearmanRow> cmd_spearman(const std::filesystem::path& csv,
                                      const std::filesystem::path& out_dir);
std::string spearman_csv(const std::vector<SpearmanRow>& rows);

}  // namespace fedlora::expcli

#endif  // FEDLORA_EXPCLI_COMMANDS_H_
