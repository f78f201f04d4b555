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

#ifndef FEDLORA_FEDSIM_FEDERATION_H_
#define FEDLORA_FEDSIM_FEDERATION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fedlora/common/error.h"
#include "fedlora/dpmech/mechanism.h"
#include "fedlora/loralm/model.h"
#include "fedlora/textdata/sharding.h"

namespace fedlora::fedsim {

using dpmech::ClientUpdate;
using dpmech::PrivacyParams;
using loralm::BaseModel;
using loralm::LoraAdapter;
using textdata::ClientShard;

struct FederationConfig {
  std::size_t n_clients = 10;
  std::size_t rounds = 100;
  std::size_t local_epochs = 3;
  std::size_t batch_size = 16;
  double lr = 0.05;
  std::uint64_t seed = 0;
  PrivacyParams privacy;

  // Execution knobs; none of them changes any computed value.
  std::size_t checkpoint_every = 0;  // 0: no intermediate checkpoints
  bool parallel_clients = false;
  bool record_wall_time = false;  // otherwise wall_ms is logged as 0
};

void validate(const FederationConfig& cfg);

struct ClientRoundRecord {
  int round = 0;
  int client_id = 0;
  double pre_clip_norm = 0.0;
  double post_clip_norm = 0.0;
  double sigma = 0.0;
  double mean_local_loss = 0.0;
  double wall_ms = 0.0;

  bool operator==(const ClientRoundRecord&) const = default;
};

struct RoundRecord {
  int round = 0;
  std::vector<ClientRoundRecord> clients;  // ascending client_id

  bool operator==(const RoundRecord&) const = default;
};

// Server-side state after `round` completed rounds.
struct GlobalState {
  int round = 0;
  LoraAdapter adapter;
  std::vector<RoundRecord> history;
};

// A client failed during a round; the round was not aggregated.
class RoundError : public Error {
 public:
  using Error::Error;
};

struct LocalTrainResult {
  ClientUpdate update;
  LoraAdapter local;  // theta_local; update == local - global
  double mean_loss = 0.0;  // mean cross-entropy over the examples trained on
};

// Copies the global adapter, runs local_epochs epochs of minibatch SGD over
// the shard's next-token examples and returns local - global. The example
// order is reshuffled every epoch (Fisher-Yates) from the stream derived
// from (seed, client_id, round, "shuffle"); the last partial batch is kept.
LocalTrainResult local_train(const ClientShard& shard,
                             const LoraAdapter& global, const BaseModel& base,
                             const FederationConfig& cfg, int round);

// The SGD loop of local_train, applied in place. Returns the mean loss.
double run_local_sgd(LoraAdapter& params,
                     std::span<const textdata::Example> examples,
                     const BaseModel& base, const FederationConfig& cfg,
                     int client_id, int round);

// All next-token examples of a shard, sequence by sequence.
std::vector<textdata::Example> shard_examples(const ClientShard& shard,
                                              std::size_t context);

// FedAvg: sum_i (|D_i| / sum_j |D_j|) * theta_i, accumulated in list order.
LoraAdapter aggregate(std::span<const LoraAdapter> params,
                      std::span<const std::size_t> sample_counts);

struct TrainingHooks {
  // Called with the state after round 0 (start), after every round that is a
  // multiple of cfg.checkpoint_every, and after the final round.
  std::function<void(const GlobalState&)> on_checkpoint;
  // Continue from a checkpointed state instead of round 0.
  std::optional<GlobalState> resume_from;
};

struct TrainingResult {
  LoraAdapter final_adapter;
  GlobalState state;
};

// The federation: for t = 1..T broadcast theta_s^{t-1}; every client trains
// locally, clips and privatizes its delta and forms theta~_i; the server
// aggregates with FedAvg. shards[i] is client i; all participate every round.
TrainingResult run_training(const std::vector<ClientShard>& shards,
                            const BaseModel& base,
                            const LoraAdapter& initial,
                            const FederationConfig& cfg,
                            const TrainingHooks& hooks = {});

// Reference single-party trainer: rounds * local_epochs epochs of the same
// SGD loop on one shard, with the same per-round shuffle streams.
LoraAdapter train_centralized(const ClientShard& shard, const BaseModel& base,
                              const LoraAdapter& initial,
                              const FederationConfig& cfg);

// Full weight matrix of the adapted model.
inline numkit::Matrix merge_weights(const BaseModel& base,
                                    const LoraAdapter& adapter) {
  return loralm::effective_weights(base, adapter);
}

}  // namespace fedlora::fedsim

#endif  // FEDLORA_FEDSIM_FEDERATION_H_
