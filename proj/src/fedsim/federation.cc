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

#include "fedlora/fedsim/federation.h"

#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "fedlora/numkit/random.h"

namespace fedlora::fedsim {

namespace {

struct ClientOutcome {
  LoraAdapter params;
  ClientRoundRecord record;
  std::exception_ptr error;
};

ClientOutcome run_client(const ClientShard& shard, const LoraAdapter& global,
                         const BaseModel& base, const FederationConfig& cfg,
                         int round) {
  const auto start = std::chrono::steady_clock::now();
  ClientOutcome out;
  LocalTrainResult local = local_train(shard, global, base, cfg, round);

  out.record.round = round;
  out.record.client_id = shard.client_id;
  out.record.mean_local_loss = local.mean_loss;
  out.record.pre_clip_norm = dpmech::update_norm(local.update);

  ClientUpdate clipped =
      cfg.privacy.enabled
          ? dpmech::clip_update(local.update, cfg.privacy.clip_norm)
          : std::move(local.update);
  out.record.post_clip_norm = dpmech::update_norm(clipped);
  out.record.sigma = cfg.privacy.enabled ? cfg.privacy.sigma : 0.0;

  if (cfg.privacy.enabled) {
    const ClientUpdate privatized =
        dpmech::privatize(clipped, cfg.privacy, cfg.seed);
    out.params = dpmech::apply_to_global(global, privatized);
  } else {
    // The mechanism is the identity here, so theta~ is theta_local itself.
    // global + (local - global) can be off by an ulp.
    out.params = std::move(local.local);
  }

  if (cfg.record_wall_time) {
    out.record.wall_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  }
  return out;
}

void run_client_guarded(const ClientShard& shard, const LoraAdapter& global,
                        const BaseModel& base, const FederationConfig& cfg,
                        int round, ClientOutcome& slot) {
  try {
    slot = run_client(shard, global, base, cfg, round);
  } catch (...) {
    slot.error = std::current_exception();
  }
}

std::string describe(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

}  // namespace

void validate(const FederationConfig& cfg) {
  if (cfg.n_clients == 0) throw ParamError("n_clients must be >= 1");
  if (cfg.rounds == 0) throw ParamError("rounds must be >= 1");
  if (cfg.local_epochs == 0) throw ParamError("local_epochs must be >= 1");
  if (cfg.batch_size == 0) throw ParamError("batch_size must be >= 1");
  if (!(cfg.lr > 0.0) || !std::isfinite(cfg.lr)) {
    throw ParamError("lr must be finite and > 0");
  }
  dpmech::validate(cfg.privacy);
}

std::vector<textdata::Example> shard_examples(const ClientShard& shard,
                                              std::size_t context) {
  std::vector<textdata::Example> out;
  for (const textdata::TokenSeq& seq : shard.sequences) {
    auto ex = textdata::make_examples(seq, context);
    out.insert(out.end(), std::make_move_iterator(ex.begin()),
               std::make_move_iterator(ex.end()));
  }
  return out;
}

double run_local_sgd(LoraAdapter& params,
                     std::span<const textdata::Example> examples,
                     const BaseModel& base, const FederationConfig& cfg,
                     int client_id, int round) {
  if (cfg.batch_size == 0) throw ParamError("batch_size must be >= 1");
  if (examples.empty() || cfg.local_epochs == 0) return 0.0;
  numkit::Rng rng(numkit::derive_stream(
      cfg.seed, static_cast<std::uint64_t>(client_id),
      static_cast<std::uint64_t>(round), "shuffle"));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<textdata::Example> batch;
  batch.reserve(cfg.batch_size);

  double loss_total = 0.0;
  std::size_t loss_count = 0;
  for (std::size_t epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.uniform_index(i)]);
    }
    for (std::size_t begin = 0; begin < order.size();
         begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      batch.clear();
      for (std::size_t j = begin; j < end; ++j) {
        batch.push_back(examples[order[j]]);
      }
      double batch_loss = 0.0;
      const loralm::GradPair g =
          loralm::grads_with_loss(base, params, batch, &batch_loss);
      loralm::sgd_step_inplace(params, g, cfg.lr);
      loss_total += batch_loss;
      loss_count += batch.size();
    }
  }
  return loss_total / static_cast<double>(loss_count);
}

LocalTrainResult local_train(const ClientShard& shard,
                             const LoraAdapter& global, const BaseModel& base,
                             const FederationConfig& cfg, int round) {
  if (shard.sequences.empty()) {
    throw ParamError("local_train: client " + std::to_string(shard.client_id) +
                     " has an empty shard");
  }
  LoraAdapter local = global;
  const std::vector<textdata::Example> examples =
      shard_examples(shard, base.context());
  LocalTrainResult result;
  result.mean_loss =
      run_local_sgd(local, examples, base, cfg, shard.client_id, round);
  result.update = dpmech::make_update(local, global, shard.client_id, round,
                                      shard.sample_count());
  result.local = std::move(local);
  return result;
}

LoraAdapter aggregate(std::span<const LoraAdapter> params,
                      std::span<const std::size_t> sample_counts) {
  if (params.empty()) throw ParamError("aggregate: no client parameters");
  if (params.size() != sample_counts.size()) {
    throw ShapeError("aggregate: " + std::to_string(params.size()) +
                     " parameter sets but " +
                     std::to_string(sample_counts.size()) + " sample counts");
  }
  std::size_t total = 0;
  for (std::size_t n : sample_counts) total += n;
  if (total == 0) throw ParamError("aggregate: total sample count is zero");
  for (const LoraAdapter& p : params) {
    if (!p.a.same_shape(params[0].a) || !p.b.same_shape(params[0].b)) {
      throw ShapeError("aggregate: client adapter shapes disagree");
    }
  }

  const double denom = static_cast<double>(total);
  auto weight = [&](std::size_t i) {
    return static_cast<double>(sample_counts[i]) / denom;
  };
  LoraAdapter out{numkit::scale(params[0].a, weight(0)),
                  numkit::scale(params[0].b, weight(0)), params[0].alpha};
  for (std::size_t i = 1; i < params.size(); ++i) {
    numkit::axpy(weight(i), params[i].a, out.a);
    numkit::axpy(weight(i), params[i].b, out.b);
  }
  return out;
}

TrainingResult run_training(const std::vector<ClientShard>& shards,
                            const BaseModel& base, const LoraAdapter& initial,
                            const FederationConfig& cfg,
                            const TrainingHooks& hooks) {
  validate(cfg);
  loralm::validate_adapter(base, initial);
  if (shards.size() != cfg.n_clients) {
    throw ParamError("run_training: " + std::to_string(shards.size()) +
                     " shards for n_clients = " +
                     std::to_string(cfg.n_clients));
  }
  for (std::size_t i = 0; i < shards.size(); ++i) {
    if (shards[i].sequences.empty()) {
      throw ParamError("run_training: shard " + std::to_string(i) +
                       " is empty");
    }
    if (i > 0 && shards[i].client_id <= shards[i - 1].client_id) {
      throw ParamError("run_training: shards must be in ascending client_id");
    }
  }

  GlobalState state;
  if (hooks.resume_from) {
    state = *hooks.resume_from;
    loralm::validate_adapter(base, state.adapter);
  } else {
    state.adapter = initial;
    if (hooks.on_checkpoint && cfg.checkpoint_every > 0) {
      hooks.on_checkpoint(state);
    }
  }

  std::vector<std::size_t> counts;
  for (const ClientShard& s : shards) counts.push_back(s.sample_count());

  const auto total_rounds = static_cast<int>(cfg.rounds);
  while (state.round < total_rounds) {
    const int t = state.round + 1;
    // Clients see a read-only snapshot of theta_s^{t-1}.
    const LoraAdapter broadcast = state.adapter;
    std::vector<ClientOutcome> outcomes(shards.size());
    if (cfg.parallel_clients && shards.size() > 1) {
      std::vector<std::jthread> workers;
      workers.reserve(shards.size());
      for (std::size_t i = 0; i < shards.size(); ++i) {
        workers.emplace_back([&, i] {
          run_client_guarded(shards[i], broadcast, base, cfg, t, outcomes[i]);
        });
      }
    } else {
      for (std::size_t i = 0; i < shards.size(); ++i) {
        run_client_guarded(shards[i], broadcast, base, cfg, t, outcomes[i]);
      }
    }

    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      if (outcomes[i].error) {
        throw RoundError("round " + std::to_string(t) + ": client " +
                         std::to_string(shards[i].client_id) +
                         " failed, round aborted: " +
                         describe(outcomes[i].error));
      }
    }

    std::vector<LoraAdapter> params;
    RoundRecord record{t, {}};
    for (ClientOutcome& o : outcomes) {
      params.push_back(std::move(o.params));
      record.clients.push_back(o.record);
    }
    state.adapter = aggregate(params, counts);
    state.round = t;
    state.history.push_back(std::move(record));

    const bool due = cfg.checkpoint_every > 0 &&
                     t % static_cast<int>(cfg.checkpoint_every) == 0;
    if (hooks.on_checkpoint && (due || t == total_rounds)) {
      hooks.on_checkpoint(state);
    }
  }
  return {state.adapter, std::move(state)};
}

LoraAdapter train_centralized(const ClientShard& shard, const BaseModel& base,
                              const LoraAdapter& initial,
                              const FederationConfig& cfg) {
  LoraAdapter params = initial;
  const std::vector<textdata::Example> examples =
      shard_examples(shard, base.context());
  for (std::size_t t = 1; t <= cfg.rounds; ++t) {
    run_local_sgd(params, examples, base, cfg, shard.client_id,
                  static_cast<int>(t));
  }
  return params;
}

}  // namespace fedlora::fedsim
