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

#include "fedlora/expcli/commands.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

#include "fedlora/common/error.h"
#include "fedlora/common/format.h"
#include "fedlora/expcli/fixtures.h"
#include "fedlora/expcli/outputs.h"
#include "fedlora/fedsim/round_log.h"
#include "fedlora/numkit/random.h"
#include "fedlora/textdata/synthetic.h"

namespace fedlora::expcli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string round_tag(int round) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "r%04d", round);
  return buf;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json epsilon_json(EpsilonEntry epsilon) {
  return epsilon ? Json(*epsilon) : Json(nullptr);
}

EpsilonEntry epsilon_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

// Seeded subsample of n sequences, kept in their original order.
std::vector<textdata::TokenSeq> subsample(const std::vector<textdata::TokenSeq>& seqs,
                                          std::size_t n, std::uint64_t seed,
                                          std::string_view tag) {
  if (n >= seqs.size()) return seqs;
  std::vector<std::size_t> idx(seqs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  numkit::Rng rng(numkit::derive_stream(seed, 0, 0, tag));
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::swap(idx[i - 1], idx[rng.uniform_index(i)]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  std::vector<textdata::TokenSeq> out;
  out.reserve(n);
  for (std::size_t i : idx) out.push_back(seqs[i]);
  return out;
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(what + ": " + e.what());
  }
}

std::vector<textdata::TokenSeq> tokenize_sessions(
    const std::vector<textdata::DialogueSession>& sessions) {
  std::vector<textdata::TokenSeq> out;
  out.reserve(sessions.size());
  for (const auto& s : sessions) {
    out.push_back(textdata::tokenize(textdata::session_text(s)));
  }
  return out;
}

}  // namespace

fs::path run_dir(const ExperimentConfig& cfg, EpsilonEntry epsilon) {
  return cfg.output_dir / ("eps-" + epsilon_label(epsilon));
}

fs::path checkpoint_path(const ExperimentConfig& cfg, EpsilonEntry epsilon,
                         int round) {
  return run_dir(cfg, epsilon) / ("checkpoint-" + run_digest(cfg, epsilon) +
                                  "-" + round_tag(round) + ".json");
}

fs::path round_log_path(const ExperimentConfig& cfg, EpsilonEntry epsilon) {
  return run_dir(cfg, epsilon) / ("rounds-" + run_digest(cfg, epsilon) + ".csv");
}

fs::path sweep_path(const ExperimentConfig& cfg, const std::string& kind,
                    const std::string& extension) {
  return cfg.output_dir / (kind + "-" + config_digest(cfg) + "." + extension);
}

std::vector<int> checkpoint_rounds(const ExperimentConfig& cfg) {
  std::vector<int> rounds;
  const std::size_t t = cfg.federation.rounds;
  for (std::size_t r = 0; r <= t; r += cfg.eval_every) {
    rounds.push_back(static_cast<int>(r));
  }
  if (rounds.back() != static_cast<int>(t)) rounds.push_back(static_cast<int>(t));
  return rounds;
}

std::vector<textdata::DialogueSession> load_sessions(const ExperimentConfig& cfg) {
  if (cfg.corpus.path) return textdata::load_corpus(*cfg.corpus.path);
  const SyntheticSpec& s = *cfg.corpus.synthetic;
  return textdata::gen_synthetic_corpus(s.seed, s.n_sessions, s.themes,
                                        s.length_range);
}

ExperimentData prepare_data(const ExperimentConfig& cfg) {
  const auto sessions = load_sessions(cfg);
  const std::size_t n = cfg.federation.n_clients;
  ExperimentData data;
  if (cfg.nonmembers == NonMemberMode::kHoldout) {
    const auto split =
        textdata::split_holdout(sessions, cfg.holdout_fraction, cfg.federation.seed);
    if (split.heldout.empty()) {
      throw DataError("holdout split is empty; raise holdout_fraction or add sessions");
    }
    data.shards = textdata::shard_by_theme(split.train, n);
    data.nonmembers = tokenize_sessions(split.heldout);
  } else {
    auto all = textdata::shard_by_theme(sessions, 2 * n);
    data.shards.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<textdata::ClientShard> rest(
        all.begin() + static_cast<std::ptrdiff_t>(n), all.end());
    data.nonmembers = privaudit::flatten_shards(rest);
  }
  data.members = privaudit::flatten_shards(data.shards);
  return data;
}

SynthSummary cmd_synth(const ExperimentConfig& cfg, const fs::path& out) {
  if (!cfg.corpus.synthetic) {
    throw ParamError("synth needs a \"synthetic\" corpus spec in the config");
  }
  const auto sessions = load_sessions(cfg);
  SynthSummary summary;
  summary.path = out.empty() ? sweep_path(cfg, "corpus", "jsonl") : out;
  summary.n_sessions = sessions.size();
  std::map<std::string, std::size_t> themes;
  for (const auto& s : sessions) ++themes[s.theme];
  summary.n_themes = themes.size();
  if (summary.path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(summary.path.parent_path(), ec);
  }
  textdata::write_corpus(summary.path, sessions);
  return summary;
}

std::vector<TrainSummary> cmd_train(const ExperimentConfig& cfg) {
  validate(cfg);
  const ExperimentData data = prepare_data(cfg);
  const auto [base, initial] = loralm::init_model(cfg.federation.seed, cfg.model);

  std::vector<TrainSummary> out;
  for (const EpsilonEntry& eps : cfg.epsilon_grid) {
    const fedsim::FederationConfig fed = run_federation(cfg, eps);
    TrainSummary summary;
    summary.epsilon = eps;
    summary.run_digest = run_digest(cfg, eps);

    fedsim::TrainingHooks hooks;
    hooks.on_checkpoint = [&](const fedsim::GlobalState& state) {
      fedsim::Checkpoint ckpt{state.round, summary.run_digest, state.adapter,
                              cfg.federation.seed};
      const fs::path path = checkpoint_path(cfg, eps, state.round);
      write_text_file(path, fedsim::checkpoint_to_json(ckpt));
      summary.files.push_back(path);
    };
    const fedsim::TrainingResult result =
        fedsim::run_training(data.shards, base, initial, fed, hooks);

    const fs::path log = round_log_path(cfg, eps);
    write_text_file(log, fedsim::round_log_csv(result.state.history));
    summary.files.push_back(log);
    if (!result.state.history.empty()) {
      const auto& clients = result.state.history.back().clients;
      double sum = 0.0;
      for (const auto& c : clients) sum += c.mean_local_loss;
      summary.final_mean_loss = sum / static_cast<double>(clients.size());
    }
    out.push_back(std::move(summary));
  }
  return out;
}

fedsim::Checkpoint load_run_checkpoint(const ExperimentConfig& cfg,
                                       EpsilonEntry epsilon, int round) {
  const fs::path path = checkpoint_path(cfg, epsilon, round);
  if (!fs::exists(path)) {
    throw IoError("missing checkpoint " + path.string() + " (run train first)");
  }
  fedsim::Checkpoint ckpt = fedsim::read_checkpoint(path);
  if (ckpt.config_digest != run_digest(cfg, epsilon) || ckpt.round != round ||
      ckpt.base_seed != cfg.federation.seed) {
    throw DataError("checkpoint " + path.string() +
                    " does not belong to this configuration");
  }
  return ckpt;
}

SweepReport cmd_attack(const ExperimentConfig& cfg) {
  validate(cfg);
  const ExperimentData data = prepare_data(cfg);
  const auto [base, initial] = loralm::init_model(cfg.federation.seed, cfg.model);
  privaudit::AttackParams params;
  params.mink_k = cfg.mink_k;
  std::size_t per_class = std::min(data.members.size(), data.nonmembers.size());
  if (cfg.mia_per_class > 0) per_class = std::min(per_class, cfg.mia_per_class);
  const auto members = subsample(data.members, per_class, cfg.federation.seed,
                                 "mia:members");
  const auto nonmembers = subsample(data.nonmembers, per_class,
                                    cfg.federation.seed, "mia:nonmembers");

  SweepReport report;
  report.config_digest = config_digest(cfg);
  report.seed = cfg.federation.seed;
  for (const EpsilonEntry& eps : cfg.epsilon_grid) {
    for (int round : checkpoint_rounds(cfg)) {
      const fedsim::Checkpoint ckpt = load_run_checkpoint(cfg, eps, round);
      loralm::validate_adapter(base, ckpt.adapter);
      for (privaudit::AttackKind kind : cfg.attacks) {
        report.attacks.push_back(
            {eps, round,
             privaudit::run_attack(base, ckpt.adapter, members, nonmembers,
                                   kind, params)});
      }
    }
  }
  write_text_file(sweep_path(cfg, "attack", "json"), attack_rows_json(report));
  write_text_file(sweep_path(cfg, "attack", "csv"), attack_rows_csv(report));
  return report;
}

SweepReport cmd_memorize(const ExperimentConfig& cfg) {
  validate(cfg);
  const ExperimentData data = prepare_data(cfg);
  const auto [base, initial] = loralm::init_model(cfg.federation.seed, cfg.model);
  privaudit::MemorizationParams params = cfg.memorization;
  params.seed = cfg.federation.seed;

  SweepReport report;
  report.config_digest = config_digest(cfg);
  report.seed = cfg.federation.seed;
  const int final_round = static_cast<int>(cfg.federation.rounds);
  for (const EpsilonEntry& eps : cfg.epsilon_grid) {
    const fedsim::Checkpoint ckpt = load_run_checkpoint(cfg, eps, final_round);
    loralm::validate_adapter(base, ckpt.adapter);
    report.memorization.push_back(
        {eps, final_round,
         privaudit::memorization_eval(base, ckpt.adapter, data.members, params)});
  }
  write_text_file(sweep_path(cfg, "memorization", "json"),
                  memorization_rows_json(report));
  write_text_file(sweep_path(cfg, "memorization", "csv"),
                  memorization_rows_csv(report));
  return report;
}

std::string attack_rows_json(const SweepReport& report) {
  Json rows = Json::array();
  for (const AttackRow& r : report.attacks) {
    rows.push_back({{"epsilon", epsilon_json(r.epsilon)},
                    {"round", r.round},
                    {"attack", std::string(privaudit::attack_name(r.report.attack))},
                    {"roc_auc", r.report.roc_auc},
                    {"pr_auc", r.report.pr_auc},
                    {"n_members", r.report.n_members},
                    {"n_nonmembers", r.report.n_nonmembers}});
  }
  Json j{{"config_digest", report.config_digest},
         {"seed", report.seed},
         {"rows", rows}};
  return j.dump(2) + "\n";
}

std::string attack_rows_csv(const SweepReport& report) {
  std::string out = csv_line({"epsilon", "round", "attack", "roc_auc", "pr_auc",
                              "n_members", "n_nonmembers"});
  for (const AttackRow& r : report.attacks) {
    out += csv_line({epsilon_label(r.epsilon), std::to_string(r.round),
                     std::string(privaudit::attack_name(r.report.attack)),
                     format_double(r.report.roc_auc),
                     format_double(r.report.pr_auc),
                     std::to_string(r.report.n_members),
                     std::to_string(r.report.n_nonmembers)});
  }
  return out;
}

std::string memorization_rows_json(const SweepReport& report) {
  Json rows = Json::array();
  for (const MemorizationRow& r : report.memorization) {
    rows.push_back({{"epsilon", epsilon_json(r.epsilon)},
                    {"round", r.round},
                    {"mean_rouge1_recall", r.report.mean_rouge1_recall},
                    {"mean_cosine", r.report.mean_cosine},
                    {"prompt_len", r.report.prompt_len},
                    {"gen_len", r.report.gen_len},
                    {"n_samples", r.report.n_samples},
                    {"n_skipped", r.report.n_skipped}});
  }
  Json j{{"config_digest", report.config_digest},
         {"seed", report.seed},
         {"rows", rows}};
  return j.dump(2) + "\n";
}

std::string memorization_rows_csv(const SweepReport& report) {
  std::string out =
      csv_line({"epsilon", "round", "mean_rouge1_recall", "mean_cosine",
                "prompt_len", "gen_len", "n_samples", "n_skipped"});
  for (const MemorizationRow& r : report.memorization) {
    out += csv_line({epsilon_label(r.epsilon), std::to_string(r.round),
                     format_double(r.report.mean_rouge1_recall),
                     format_double(r.report.mean_cosine),
                     std::to_string(r.report.prompt_len),
                     std::to_string(r.report.gen_len),
                     std::to_string(r.report.n_samples),
                     std::to_string(r.report.n_skipped)});
  }
  return out;
}

SweepReport parse_attack_rows_json(const std::string& text) {
  const Json j = parse_json(text, "attack report");
  SweepReport report;
  try {
    report.config_digest = j.at("config_digest").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    for (const Json& r : j.at("rows")) {
      AttackRow row;
      row.epsilon = epsilon_from_json(r.at("epsilon"));
      row.round = r.at("round").get<int>();
      row.report.attack = privaudit::parse_attack(r.at("attack").get<std::string>());
      row.report.roc_auc = r.at("roc_auc").get<double>();
      row.report.pr_auc = r.at("pr_auc").get<double>();
      row.report.n_members = r.at("n_members").get<std::size_t>();
      row.report.n_nonmembers = r.at("n_nonmembers").get<std::size_t>();
      report.attacks.push_back(row);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("attack report: ") + e.what());
  }
  return report;
}

SweepReport parse_memorization_rows_json(const std::string& text) {
  const Json j = parse_json(text, "memorization report");
  SweepReport report;
  try {
    report.config_digest = j.at("config_digest").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    for (const Json& r : j.at("rows")) {
      MemorizationRow row;
      row.epsilon = epsilon_from_json(r.at("epsilon"));
      row.round = r.at("round").get<int>();
      row.report.mean_rouge1_recall = r.at("mean_rouge1_recall").get<double>();
      row.report.mean_cosine = r.at("mean_cosine").get<double>();
      row.report.prompt_len = r.at("prompt_len").get<std::size_t>();
      row.report.gen_len = r.at("gen_len").get<std::size_t>();
      row.report.n_samples = r.at("n_samples").get<std::size_t>();
      row.report.n_skipped = r.at("n_skipped").get<std::size_t>();
      report.memorization.push_back(row);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("memorization report: ") + e.what());
  }
  return report;
}

std::vector<ReportRow> cmd_report(const ExperimentConfig& cfg) {
  const fs::path attack_file = sweep_path(cfg, "attack", "json");
  if (!fs::exists(attack_file)) {
    throw IoError("missing " + attack_file.string() + " (run attack first)");
  }
  const SweepReport attacks = parse_attack_rows_json(read_text_file(attack_file));
  std::optional<SweepReport> memo;
  const fs::path memo_file = sweep_path(cfg, "memorization", "json");
  if (fs::exists(memo_file)) {
    memo = parse_memorization_rows_json(read_text_file(memo_file));
  }

  const int final_round = static_cast<int>(cfg.federation.rounds);
  std::vector<ReportRow> rows;
  for (const AttackRow& a : attacks.attacks) {
    if (a.round != final_round) continue;
    ReportRow row;
    row.epsilon = a.epsilon;
    row.round = a.round;
    row.attack = a.report.attack;
    row.roc_auc = a.report.roc_auc;
    row.pr_auc = a.report.pr_auc;
    if (memo) {
      for (const MemorizationRow& m : memo->memorization) {
        if (m.epsilon == a.epsilon && m.round == a.round) {
          row.mean_rouge1_recall = m.report.mean_rouge1_recall;
          row.mean_cosine = m.report.mean_cosine;
        }
      }
    }
    rows.push_back(row);
  }

  Json j_rows = Json::array();
  for (const ReportRow& r : rows) {
    Json row{{"epsilon", epsilon_json(r.epsilon)},
             {"round", r.round},
             {"attack", std::string(privaudit::attack_name(r.attack))},
             {"roc_auc", r.roc_auc},
             {"pr_auc", r.pr_auc}};
    if (r.mean_rouge1_recall) {
      row["mean_rouge1_recall"] = *r.mean_rouge1_recall;
      row["mean_cosine"] = *r.mean_cosine;
    }
    j_rows.push_back(row);
  }
  Json j{{"config_digest", config_digest(cfg)},
         {"seed", cfg.federation.seed},
         {"rows", j_rows}};
  write_text_file(sweep_path(cfg, "report", "json"), j.dump(2) + "\n");
  write_text_file(sweep_path(cfg, "report", "csv"), report_csv(rows));
  return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out = csv_line({"epsilon", "round", "attack", "roc_auc", "pr_auc",
                              "mean_rouge1_recall", "mean_cosine"});
  for (const ReportRow& r : rows) {
    out += csv_line(
        {epsilon_label(r.epsilon), std::to_string(r.round),
         std::string(privaudit::attack_name(r.attack)), format_double(r.roc_auc),
         format_double(r.pr_auc),
         r.mean_rouge1_recall ? format_double(*r.mean_rouge1_recall) : "",
         r.mean_cosine ? format_double(*r.mean_cosine) : ""});
  }
  return out;
}

std::vector<SpearmanRow> spearman_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty()) throw DataError("spearman csv: missing header row");

  // dimension -> (auto column, human column), in order of first appearance.
  std::vector<std::string> dims;
  std::map<std::string, std::pair<int, int>> cols;
  const std::string kAuto = "_auto";
  const std::string kHuman = "_human";
  auto ends_with = [](const std::string& s, const std::string& suffix) {
    return s.size() > suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    std::string dim;
    bool is_auto = false;
    if (ends_with(name, kAuto)) {
      dim = name.substr(0, name.size() - kAuto.size());
      is_auto = true;
    } else if (ends_with(name, kHuman)) {
      dim = name.substr(0, name.size() - kHuman.size());
    } else {
      continue;
    }
    auto [it, fresh] = cols.try_emplace(dim, -1, -1);
    if (fresh) dims.push_back(dim);
    int& slot = is_auto ? it->second.first : it->second.second;
    if (slot >= 0) throw DataError("spearman csv: duplicate column " + name);
    slot = static_cast<int>(c);
  }
  if (dims.empty()) {
    throw DataError("spearman csv: no <dim>_auto/<dim>_human column pairs");
  }
  for (const std::string& d : dims) {
    if (cols[d].first < 0 || cols[d].second < 0) {
      throw DataError("spearman csv: dimension \"" + d +
                      "\" needs both _auto and _human columns");
    }
  }

  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw DataError("spearman csv line " + std::to_string(line_no) +
                      ": expected " + std::to_string(header.size()) +
                      " fields, got " + std::to_string(fields.size()));
    }
    auto number = [&](int c) {
      const std::string& f = fields[static_cast<std::size_t>(c)];
      try {
        std::size_t used = 0;
        const double v = std::stod(f, &used);
        if (used == f.size()) return v;
      } catch (const std::exception&) {
      }
      throw DataError("spearman csv line " + std::to_string(line_no) +
                      ": not a number: \"" + f + "\"");
    };
    for (const std::string& d : dims) {
      values[d].first.push_back(number(cols[d].first));
      values[d].second.push_back(number(cols[d].second));
    }
  }

  std::vector<SpearmanRow> rows;
  for (const std::string& d : dims) {
    try {
      rows.push_back({d, privaudit::spearman(values[d].first, values[d].second)});
    } catch (const ParamError& e) {
      throw DataError("spearman csv, dimension \"" + d + "\": " + e.what());
    }
  }
  return rows;
}

std::vector<SpearmanRow> spearman_builtin() {
  const RatingTable& t = builtin_rating_table();
  std::vector<SpearmanRow> rows;
  for (std::size_t d = 0; d < t.dimensions.size(); ++d) {
    std::vector<double> a;
    std::vector<double> h;
    for (std::size_t i = 0; i < t.datasets.size(); ++i) {
      a.push_back(t.automatic[i][d]);
      h.push_back(t.human[i][d]);
    }
    rows.push_back({t.dimensions[d], privaudit::spearman(a, h)});
  }
  return rows;
}

std::vector<SpearmanRow> cmd_spearman(const fs::path& csv, const fs::path& out_dir) {
  std::vector<SpearmanRow> rows;
  std::string digest;
  if (csv.empty()) {
    rows = spearman_builtin();
    digest = "builtin";
  } else {
    if (!fs::exists(csv)) throw IoError("csv not found: " + csv.string());
    const std::string text = read_text_file(csv);
    rows = spearman_from_csv(text);
    digest = hex16(numkit::fnv1a64(text));
  }
  if (!out_dir.empty()) {
    write_text_file(out_dir / ("spearman-" + digest + ".csv"), spearman_csv(rows));
  }
  return rows;
}

std::string spearman_csv(const std::vector<SpearmanRow>& rows) {
  std::string out = csv_line({"dimension", "rho", "p_value", "n"});
  for (const SpearmanRow& r : rows) {
    out += csv_line({r.dimension, format_double(r.result.rho),
                     format_double(r.result.p_value), std::to_string(r.result.n)});
  }
  return out;
}

}  // namespace fedlora::expcli
