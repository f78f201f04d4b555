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

// Command-line driver: synth, train, attack, memorize, spearman, report.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fedlora/common/error.h"
#include "fedlora/common/format.h"
#include "fedlora/expcli/commands.h"
#include "fedlora/expcli/config.h"

namespace {

using namespace fedlora;
using namespace fedlora::expcli;

struct Options {
  std::string config;
  std::string output_dir;
  std::string out;
  std::string csv;
  bool parallel = false;
};

ExperimentConfig load(const Options& opt) {
  ExperimentConfig cfg = load_config(opt.config);
  if (!opt.output_dir.empty()) cfg.output_dir = opt.output_dir;
  if (opt.parallel) cfg.federation.parallel_clients = true;
  return cfg;
}

void print_spearman(const std::vector<SpearmanRow>& rows) {
  std::printf("%-12s %10s %10s %4s\n", "dimension", "rho", "p", "n");
  for (const SpearmanRow& r : rows) {
    std::printf("%-12s %10.6f %10.6f %4zu\n", r.dimension.c_str(), r.result.rho,
                r.result.p_value, r.result.n);
  }
}

int run(const std::string& command, const Options& opt) {
  if (command == "synth") {
    const SynthSummary s = cmd_synth(load(opt), opt.out);
    std::printf("wrote %zu sessions over %zu themes to %s\n", s.n_sessions,
                s.n_themes, s.path.string().c_str());
  } else if (command == "train") {
    const ExperimentConfig cfg = load(opt);
    for (const TrainSummary& t : cmd_train(cfg)) {
      std::printf("epsilon=%s run=%s final_mean_loss=%s files=%zu\n",
                  epsilon_label(t.epsilon).c_str(), t.run_digest.c_str(),
                  format_double(t.final_mean_loss).c_str(), t.files.size());
    }
  } else if (command == "attack") {
    const ExperimentConfig cfg = load(opt);
    const SweepReport r = cmd_attack(cfg);
    std::fputs(attack_rows_csv(r).c_str(), stdout);
  } else if (command == "memorize") {
    const ExperimentConfig cfg = load(opt);
    const SweepReport r = cmd_memorize(cfg);
    std::fputs(memorization_rows_csv(r).c_str(), stdout);
  } else if (command == "spearman") {
    print_spearman(cmd_spearman(opt.csv, opt.output_dir));
  } else if (command == "report") {
    std::fputs(report_csv(cmd_report(load(opt))).c_str(), stdout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated LoRA training with differential privacy, plus "
               "membership-inference and memorization audits."};
  app.require_subcommand(1);
  Options opt;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", opt.config, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output-dir", opt.output_dir,
                    "override output_dir (also: FEDLORA_OUTPUT_DIR)");
  };

  CLI::App* synth = app.add_subcommand("synth", "write a synthetic corpus");
  add_config(synth);
  synth->add_option("--out", opt.out, "corpus path (default: under output_dir)");

  CLI::App* train = app.add_subcommand("train", "run every grid point");
  add_config(train);
  train->add_flag("--parallel", opt.parallel, "train clients on threads");

  add_config(app.add_subcommand("attack", "membership inference over checkpoints"));
  add_config(app.add_subcommand("memorize", "memorization of final checkpoints"));
  add_config(app.add_subcommand("report", "final-round summary"));

  CLI::App* spear = app.add_subcommand("spearman", "rank correlation table");
  spear->add_option("--csv", opt.csv,
                    "paired <dim>_auto/<dim>_human columns (default: built-in)");
  spear->add_option("-o,--output-dir", opt.output_dir, "also write a CSV here");

  CLI11_PARSE(app, argc, argv);

  try {
    return run(app.get_subcommands().front()->get_name(), opt);
  } catch (const std::exception& e) {
    std::cerr << "fedlora: error: " << e.what() << "\n";
    return 1;
  }
}
