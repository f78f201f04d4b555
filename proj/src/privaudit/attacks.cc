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

#include "fedlora/privaudit/attacks.h"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "fedlora/common/error.h"
#include "fedlora/numkit/random.h"

namespace fedlora::privaudit {

namespace {

void require_nonempty(const TokenSeq& seq, const char* op) {
  if (seq.empty()) throw ParamError(std::string(op) + ": empty sequence");
}

double mean(const std::vector<double>& v) {
  double total = 0.0;
  for (double x : v) total += x;
  return total / static_cast<double>(v.size());
}

}  // namespace

std::string_view attack_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::kLoss:
      return "loss";
    case AttackKind::kMinK:
      return "mink";
    case AttackKind::kZlib:
      return "zlib";
  }
  return "unknown";
}

AttackKind parse_attack(std::string_view name) {
  if (name == "loss") return AttackKind::kLoss;
  if (name == "mink") return AttackKind::kMinK;
  if (name == "zlib") return AttackKind::kZlib;
  throw ParamError("unknown attack \"" + std::string(name) +
                   "\" (expected loss, mink or zlib)");
}

double loss_score(const BaseModel& base, const LoraAdapter& adapter,
                  const TokenSeq& seq) {
  require_nonempty(seq, "loss_score");
  return -loralm::sequence_loss(base, adapter, seq);
}

double mink_of_logprobs(std::vector<double> logprobs, double k_percent) {
  if (!(k_percent > 0.0 && k_percent <= 100.0)) {
    throw ParamError("min-k: k must be in (0, 100], got " +
                     std::to_string(k_percent));
  }
  if (logprobs.empty()) throw ParamError("min-k: empty sequence");
  std::sort(logprobs.begin(), logprobs.end());
  const double exact = static_cast<double>(logprobs.size()) * k_percent / 100.0;
  auto take = static_cast<std::size_t>(std::ceil(exact));
  take = std::clamp<std::size_t>(take, 1, logprobs.size());
  logprobs.resize(take);
  return mean(logprobs);
}

double mink_score(const BaseModel& base, const LoraAdapter& adapter,
                  const TokenSeq& seq, double k_percent) {
  require_nonempty(seq, "mink_score");
  return mink_of_logprobs(loralm::per_token_logprobs(base, adapter, seq),
                          k_percent);
}

std::string deflate_raw(std::string_view bytes) {
  z_stream strm{};
  // Negative window bits select a raw stream without header or checksum.
  if (deflateInit2(&strm, Z_BEST_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error("deflateInit2 failed");
  }
  std::string out(deflateBound(&strm, bytes.size()), '\0');
  strm.next_in =
      reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
  strm.avail_in = static_cast<uInt>(bytes.size());
  strm.next_out = reinterpret_cast<Bytef*>(out.data());
  strm.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&strm, Z_FINISH);
  const std::size_t produced = strm.total_out;
  deflateEnd(&strm);
  if (rc != Z_STREAM_END) throw Error("deflate did not finish");
  out.resize(produced);
  return out;
}

double zlib_score(const BaseModel& base, const LoraAdapter& adapter,
                  const TokenSeq& seq) {
  require_nonempty(seq, "zlib_score");
  const double total_nll = loralm::sequence_loss(base, adapter, seq) *
                           static_cast<double>(seq.size());
  const auto z = static_cast<double>(
      deflate_raw(textdata::detokenize(seq)).size());
  return -total_nll / z;
}

std::string content_hash(const TokenSeq& seq) {
  const std::uint64_t h = numkit::fnv1a64(std::string_view(
      reinterpret_cast<const char*>(seq.data()), seq.size()));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::vector<AttackScore> score_samples(const BaseModel& base,
                                       const LoraAdapter& adapter,
                                       const std::vector<TokenSeq>& members,
                                       const std::vector<TokenSeq>& nonmembers,
                                       AttackKind attack,
                                       const AttackParams& params) {
  std::vector<AttackScore> scores;
  scores.reserve(members.size() + nonmembers.size());
  auto score_one = [&](const TokenSeq& seq) {
    switch (attack) {
      case AttackKind::kLoss:
        return loss_score(base, adapter, seq);
      case AttackKind::kMinK:
        return mink_score(base, adapter, seq, params.mink_k);
      case AttackKind::kZlib:
        return zlib_score(base, adapter, seq);
    }
    throw ParamError("unknown attack");
  };
  std::int64_t id = 0;
  for (const TokenSeq& seq : members) {
    scores.push_back({id++, true, score_one(seq)});
  }
  for (const TokenSeq& seq : nonmembers) {
    scores.push_back({id++, false, score_one(seq)});
  }

  if (params.null_permutation_seed) {
    std::vector<double> perm(scores.size());
    std::iota(perm.begin(), perm.end(), 0.0);
    numkit::Rng rng(numkit::derive_stream(*params.null_permutation_seed, 0, 0,
                                          "null_permutation"));
    for (std::size_t i = perm.size(); i > 1; --i) {
      std::swap(perm[i - 1], perm[rng.uniform_index(i)]);
    }
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i].score = perm[i];
  }
  return scores;
}

AucReport run_attack(const BaseModel& base, const LoraAdapter& adapter,
                     const std::vector<TokenSeq>& members,
                     const std::vector<TokenSeq>& nonmembers,
                     AttackKind attack, const AttackParams& params) {
  if (members.empty() || nonmembers.empty()) {
    throw ParamError("run_attack: need at least one member and one non-member");
  }
  std::map<std::string, std::vector<const TokenSeq*>> member_hashes;
  for (const TokenSeq& seq : members) {
    member_hashes[content_hash(seq)].push_back(&seq);
  }
  std::vector<std::string> overlap;
  for (const TokenSeq& seq : nonmembers) {
    const std::string h = content_hash(seq);
    auto it = member_hashes.find(h);
    if (it == member_hashes.end()) continue;
    const bool same = std::any_of(it->second.begin(), it->second.end(),
                                  [&](const TokenSeq* m) { return *m == seq; });
    if (same && std::find(overlap.begin(), overlap.end(), h) == overlap.end()) {
      overlap.push_back(h);
    }
  }
  if (!overlap.empty()) {
    std::string msg = "run_attack: member and non-member sets overlap:";
    for (const std::string& h : overlap) msg += " " + h;
    throw DataError(msg);
  }

  const std::vector<AttackScore> scores =
      score_samples(base, adapter, members, nonmembers, attack, params);
  AucReport report;
  report.attack = attack;
  report.roc_auc = roc_auc(scores);
  report.pr_auc = pr_auc(scores);
  report.n_members = members.size();
  report.n_nonmembers = nonmembers.size();
  return report;
}

std::vector<TokenSeq> flatten_shards(
    const std::vector<textdata::ClientShard>& shards) {
  std::vector<TokenSeq> out;
  for (const auto& shard : shards) {
    out.insert(out.end(), shard.sequences.begin(), shard.sequences.end());
  }
  return out;
}

}  // namespace fedlora::privaudit
