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

#include "fedlora/expcli/config.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "fedlora/common/error.h"
#include "fedlora/common/format.h"
#include "fedlora/numkit/random.h"

namespace fedlora::expcli {

namespace {

using Json = nlohmann::ordered_json;

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported.
class ObjectReader {
 public:
  ObjectReader(const Json& obj, std::string where)
      : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ParamError(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const Json& take(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  std::string name(const std::string& key) const {
    return where_.empty() ? key : where_ + "." + key;
  }

  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const Json& v = take(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw ParamError(name(key) + ": expected a non-negative integer");
  }

  std::size_t get_size(const std::string& key, std::size_t fallback) {
    return static_cast<std::size_t>(get_uint(key, fallback));
  }

  double get_double(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const Json& v = take(key);
    if (!v.is_number()) throw ParamError(name(key) + ": expected a number");
    return v.get<double>();
  }

  bool get_bool(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Json& v = take(key);
    if (!v.is_boolean()) throw ParamError(name(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string get_string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const Json& v = take(key);
    if (!v.is_string()) throw ParamError(name(key) + ": expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) {
        throw ParamError("unknown config key \"" + name(item.key()) + "\"");
      }
    }
  }

 private:
  const Json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

fedsim::FederationConfig read_federation(const Json& j) {
  ObjectReader r(j, "federation");
  fedsim::FederationConfig f;
  f.n_clients = r.get_size("n_clients", f.n_clients);
  f.rounds = r.get_size("rounds", f.rounds);
  f.local_epochs = r.get_size("local_epochs", f.local_epochs);
  f.batch_size = r.get_size("batch_size", f.batch_size);
  f.lr = r.get_double("lr", f.lr);
  f.seed = r.get_uint("seed", f.seed);
  if (r.has("privacy")) {
    ObjectReader p(r.take("privacy"), "federation.privacy");
    f.privacy.delta = p.get_double("delta", f.privacy.delta);
    f.privacy.clip_norm = p.get_double("clip_norm", f.privacy.clip_norm);
    f.privacy.sensitivity = p.get_double("sensitivity", f.privacy.sensitivity);
    p.finish();
  }
  f.parallel_clients = r.get_bool("parallel_clients", f.parallel_clients);
  f.record_wall_time = r.get_bool("record_wall_time", f.record_wall_time);
  r.finish();
  return f;
}

loralm::ModelConfig read_model(const Json& j) {
  ObjectReader r(j, "model");
  loralm::ModelConfig m;
  m.embed_dim = r.get_size("embed_dim", m.embed_dim);
  m.context = r.get_size("context", m.context);
  m.rank = r.get_size("rank", m.rank);
  m.alpha = r.get_double("alpha", m.alpha);
  r.finish();
  return m;
}

CorpusSpec read_corpus(const Json& j) {
  ObjectReader r(j, "corpus");
  CorpusSpec c;
  if (r.has("path")) c.path = r.get_string("path", "");
  if (r.has("synthetic")) {
    ObjectReader s(r.take("synthetic"), "corpus.synthetic");
    SyntheticSpec spec;
    spec.seed = s.get_uint("seed", spec.seed);
    spec.n_sessions = s.get_size("n_sessions", spec.n_sessions);
    if (s.has("themes")) {
      const Json& themes = s.take("themes");
      if (!themes.is_array()) {
        throw ParamError("corpus.synthetic.themes: expected a list of strings");
      }
      spec.themes.clear();
      for (const Json& t : themes) {
        if (!t.is_string()) {
          throw ParamError("corpus.synthetic.themes: expected a list of strings");
        }
        spec.themes.push_back(t.get<std::string>());
      }
    }
    if (s.has("length_range")) {
      const Json& lr = s.take("length_range");
      if (!lr.is_array() || lr.size() != 2 || !lr[0].is_number_unsigned() ||
          !lr[1].is_number_unsigned()) {
        throw ParamError(
            "corpus.synthetic.length_range: expected [min, max] integers");
      }
      spec.length_range.min = lr[0].get<std::size_t>();
      spec.length_range.max = lr[1].get<std::size_t>();
    }
    s.finish();
    c.synthetic = spec;
  }
  r.finish();
  return c;
}

std::vector<EpsilonEntry> read_grid(const Json& j) {
  if (!j.is_array()) throw ParamError("epsilon_grid: expected a list");
  std::vector<EpsilonEntry> grid;
  for (const Json& e : j) {
    if (e.is_null() || (e.is_string() && e.get<std::string>() == "none")) {
      grid.push_back(std::nullopt);
    } else if (e.is_number()) {
      grid.push_back(e.get<double>());
    } else {
      throw ParamError("epsilon_grid: entries must be numbers or \"none\"");
    }
  }
  return grid;
}

Json grid_to_json(const std::vector<EpsilonEntry>& grid) {
  Json out = Json::array();
  for (const EpsilonEntry& e : grid) {
    if (e) {
      out.push_back(*e);
    } else {
      out.push_back("none");
    }
  }
  return out;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json digest_view(const ExperimentConfig& cfg) {
  Json j = Json::parse(config_to_json_text(cfg));
  j.erase("output_dir");
  j["federation"].erase("parallel_clients");
  j["federation"].erase("record_wall_time");
  return j;
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  fedsim::FederationConfig fed = cfg.federation;
  fed.privacy = dpmech::PrivacyParams::disabled();
  fedsim::validate(fed);
  // Range-checks delta, clip_norm and sensitivity.
  (void)dpmech::PrivacyParams::gaussian(1.0, cfg.federation.privacy.delta,
                                        cfg.federation.privacy.clip_norm,
                                        cfg.federation.privacy.sensitivity);

  const loralm::ModelConfig& m = cfg.model;
  if (m.embed_dim == 0 || m.context == 0 || m.rank == 0) {
    throw ParamError("model: embed_dim, context and rank must be >= 1");
  }
  if (m.rank >= std::min(loralm::kVocabSize, m.embed_dim)) {
    throw ParamError("model: rank must be < min(256, embed_dim)");
  }
  if (!(m.alpha > 0.0) || !std::isfinite(m.alpha)) {
    throw ParamError("model: alpha must be finite and > 0");
  }

  if (cfg.corpus.path.has_value() == cfg.corpus.synthetic.has_value()) {
    throw ParamError("corpus: give exactly one of \"path\" and \"synthetic\"");
  }
  if (cfg.corpus.path && cfg.corpus.path->empty()) {
    throw ParamError("corpus.path: must be non-empty");
  }
  if (cfg.corpus.synthetic) {
    const SyntheticSpec& s = *cfg.corpus.synthetic;
    if (s.n_sessions == 0) throw ParamError("corpus.synthetic.n_sessions must be >= 1");
    if (s.themes.empty()) throw ParamError("corpus.synthetic.themes must be non-empty");
    if (s.length_range.min == 0 || s.length_range.min > s.length_range.max) {
      throw ParamError("corpus.synthetic.length_range must satisfy 1 <= min <= max");
    }
  }

  if (cfg.epsilon_grid.empty()) throw ParamError("epsilon_grid must be non-empty");
  std::set<std::string> labels;
  for (const EpsilonEntry& e : cfg.epsilon_grid) {
    if (e && (!(*e > 0.0) || !std::isfinite(*e))) {
      throw ParamError("epsilon_grid: epsilon must be finite and > 0");
    }
    if (!labels.insert(epsilon_label(e)).second) {
      throw ParamError("epsilon_grid: duplicate entry " + epsilon_label(e));
    }
  }

  if (cfg.attacks.empty()) throw ParamError("attacks must be non-empty");
  std::set<privaudit::AttackKind> kinds(cfg.attacks.begin(), cfg.attacks.end());
  if (kinds.size() != cfg.attacks.size()) throw ParamError("attacks: duplicate entry");
  if (!(cfg.mink_k > 0.0 && cfg.mink_k <= 100.0)) {
    throw ParamError("mink_k must be in (0, 100]");
  }
  if (cfg.memorization.prompt_len == 0 || cfg.memorization.gen_len == 0 ||
      cfg.memorization.n_samples == 0) {
    throw ParamError("memorization: prompt_len, gen_len and n_samples must be >= 1");
  }
  if (cfg.eval_every == 0) throw ParamError("eval_every must be >= 1");
  if (cfg.output_dir.empty()) throw ParamError("output_dir must be non-empty");
  if (cfg.nonmembers == NonMemberMode::kHoldout &&
      !(cfg.holdout_fraction > 0.0 && cfg.holdout_fraction < 1.0)) {
    throw ParamError("holdout_fraction must be in (0, 1)");
  }
}

ExperimentConfig config_from_json_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParamError(std::string("config is not valid JSON: ") + e.what());
  }
  ObjectReader r(j, "");
  ExperimentConfig cfg;
  if (r.has("federation")) cfg.federation = read_federation(r.take("federation"));
  if (r.has("model")) cfg.model = read_model(r.take("model"));
  if (r.has("corpus")) cfg.corpus = read_corpus(r.take("corpus"));
  if (r.has("epsilon_grid")) cfg.epsilon_grid = read_grid(r.take("epsilon_grid"));
  if (r.has("attacks")) {
    const Json& a = r.take("attacks");
    if (!a.is_array()) throw ParamError("attacks: expected a list");
    cfg.attacks.clear();
    for (const Json& name : a) {
      if (!name.is_string()) throw ParamError("attacks: expected attack names");
      cfg.attacks.push_back(privaudit::parse_attack(name.get<std::string>()));
    }
  }
  cfg.mink_k = r.get_double("mink_k", cfg.mink_k);
  cfg.mia_per_class = r.get_size("mia_per_class", cfg.mia_per_class);
  if (r.has("memorization")) {
    ObjectReader m(r.take("memorization"), "memorization");
    cfg.memorization.prompt_len = m.get_size("prompt_len", cfg.memorization.prompt_len);
    cfg.memorization.gen_len = m.get_size("gen_len", cfg.memorization.gen_len);
    cfg.memorization.n_samples = m.get_size("n_samples", cfg.memorization.n_samples);
    m.finish();
  }
  cfg.eval_every = r.get_size("eval_every", cfg.eval_every);
  cfg.output_dir = r.get_string("output_dir", cfg.output_dir.string());
  const std::string mode = r.get_string("nonmembers", "holdout");
  if (mode == "holdout") {
    cfg.nonmembers = NonMemberMode::kHoldout;
  } else if (mode == "shards") {
    cfg.nonmembers = NonMemberMode::kShards;
  } else {
    throw ParamError("nonmembers: expected \"holdout\" or \"shards\", got \"" +
                     mode + "\"");
  }
  cfg.holdout_fraction = r.get_double("holdout_fraction", cfg.holdout_fraction);
  r.finish();
  cfg.memorization.seed = cfg.federation.seed;
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("config not found: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  ExperimentConfig cfg = config_from_json_text(text.str());
  apply_env_overrides(cfg);
  return cfg;
}

void apply_env_overrides(ExperimentConfig& cfg) {
  const char* dir = std::getenv(kOutputDirEnv);
  if (dir != nullptr && *dir != '\0') cfg.output_dir = dir;
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  Json j;
  const fedsim::FederationConfig& f = cfg.federation;
  j["federation"] = {
      {"n_clients", f.n_clients},
      {"rounds", f.rounds},
      {"local_epochs", f.local_epochs},
      {"batch_size", f.batch_size},
      {"lr", f.lr},
      {"seed", f.seed},
      {"privacy",
       {{"delta", f.privacy.delta},
        {"clip_norm", f.privacy.clip_norm},
        {"sensitivity", f.privacy.sensitivity}}},
      {"parallel_clients", f.parallel_clients},
      {"record_wall_time", f.record_wall_time}};
  j["model"] = {{"embed_dim", cfg.model.embed_dim},
                {"context", cfg.model.context},
                {"rank", cfg.model.rank},
                {"alpha", cfg.model.alpha}};
  Json corpus = Json::object();
  if (cfg.corpus.path) corpus["path"] = cfg.corpus.path->string();
  if (cfg.corpus.synthetic) {
    const SyntheticSpec& s = *cfg.corpus.synthetic;
    corpus["synthetic"] = {
        {"seed", s.seed},
        {"n_sessions", s.n_sessions},
        {"themes", s.themes},
        {"length_range", {s.length_range.min, s.length_range.max}}};
  }
  j["corpus"] = corpus;
  j["epsilon_grid"] = grid_to_json(cfg.epsilon_grid);
  Json attacks = Json::array();
  for (privaudit::AttackKind a : cfg.attacks) {
    attacks.push_back(std::string(privaudit::attack_name(a)));
  }
  j["attacks"] = attacks;
  j["mink_k"] = cfg.mink_k;
  j["mia_per_class"] = cfg.mia_per_class;
  j["memorization"] = {{"prompt_len", cfg.memorization.prompt_len},
                       {"gen_len", cfg.memorization.gen_len},
                       {"n_samples", cfg.memorization.n_samples}};
  j["eval_every"] = cfg.eval_every;
  j["output_dir"] = cfg.output_dir.string();
  j["nonmembers"] = cfg.nonmembers == NonMemberMode::kHoldout ? "holdout" : "shards";
  j["holdout_fraction"] = cfg.holdout_fraction;
  return j.dump(2) + "\n";
}

std::string config_digest(const ExperimentConfig& cfg) {
  return hex16(numkit::fnv1a64(digest_view(cfg).dump()));
}

std::string run_digest(const ExperimentConfig& cfg, EpsilonEntry epsilon) {
  Json j = digest_view(cfg);
  j["run_epsilon"] = epsilon_label(epsilon);
  return hex16(numkit::fnv1a64(j.dump()));
}

std::string epsilon_label(EpsilonEntry epsilon) {
  return epsilon ? format_double(*epsilon) : std::string("none");
}

fedsim::FederationConfig run_federation(const ExperimentConfig& cfg,
                                        EpsilonEntry epsilon) {
  fedsim::FederationConfig fed = cfg.federation;
  const dpmech::PrivacyParams& t = cfg.federation.privacy;
  fed.privacy = epsilon ? dpmech::PrivacyParams::gaussian(
                              *epsilon, t.delta, t.clip_norm, t.sensitivity)
                        : dpmech::PrivacyParams::disabled();
  fed.checkpoint_every = cfg.eval_every;
  return fed;
}

}  // namespace fedlora::expcli
