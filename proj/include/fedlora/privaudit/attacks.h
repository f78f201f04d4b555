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

#ifndef FEDLORA_PRIVAUDIT_ATTACKS_H_
#define FEDLORA_PRIVAUDIT_ATTACKS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedlora/loralm/model.h"
#include "fedlora/privaudit/auc.h"
#include "fedlora/textdata/sharding.h"

namespace fedlora::privaudit {

using loralm::BaseModel;
using loralm::LoraAdapter;
using textdata::TokenSeq;

enum class AttackKind { kLoss, kMinK, kZlib };

std::string_view attack_name(AttackKind kind);
// "loss", "mink" or "zlib"; anything else is a ParamError.
AttackKind parse_attack(std::string_view name);

// LOSS: -sequence_loss.
double loss_score(const BaseModel& base, const LoraAdapter& adapter,
                  const TokenSeq& seq);

// Min-k% Prob: mean of the ceil(len * k / 100) lowest token log-probs.
double mink_score(const BaseModel& base, const LoraAdapter& adapter,
                  const TokenSeq& seq, double k_percent);
// The selection rule on precomputed log-probs.
double mink_of_logprobs(std::vector<double> logprobs, double k_percent);

// Raw DEFLATE (RFC 1951, no zlib/gzip framing) at compression level 9.
std::string deflate_raw(std::string_view bytes);

// zlib entropy: -(total NLL in nats) / (DEFLATE byte length of the text).
double zlib_score(const BaseModel& base, const LoraAdapter& adapter,
                  const TokenSeq& seq);

struct AttackParams {
  double mink_k = 20.0;
  // Test hook: replace the attack scores with a random permutation of
  // 0..n-1 drawn from this seed.
  std::optional<std::uint64_t> null_permutation_seed;
};

struct AucReport {
  AttackKind attack = AttackKind::kLoss;
  double roc_auc = 0.5;
  double pr_auc = 0.0;
  std::size_t n_members = 0;
  std::size_t n_nonmembers = 0;
};

// Hex FNV-1a digest of a sequence's bytes.
std::string content_hash(const TokenSeq& seq);

// Scores members (sample ids 0..m-1) then non-members (m..m+n-1).
std::vector<AttackScore> score_samples(const BaseModel& base,
                                       const LoraAdapter& adapter,
                                       const std::vector<TokenSeq>& members,
                                       const std::vector<TokenSeq>& nonmembers,
                                       AttackKind attack,
                                       const AttackParams& params = {});

// Scores both sets and reports ROC/PR AUC. Throws DataError listing the
// content hashes of any sequence present in both sets.
AucReport run_attack(const BaseModel& base, const LoraAdapter& adapter,
                     const std::vector<TokenSeq>& members,
                     const std::vector<TokenSeq>& nonmembers,
                     AttackKind attack, const AttackParams& params = {});

// All sequences of the given shards, in shard order.
std::vector<TokenSeq> flatten_shards(
    const std::vector<textdata::ClientShard>& shards);

}  // namespace fedlora::privaudit

#endif  // FEDLORA_PRIVAUDIT_ATTACKS_H_
