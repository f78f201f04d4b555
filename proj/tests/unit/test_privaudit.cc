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

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fedlora/common/error.h"
#include "fedlora/fedsim/federation.h"
#include "fedlora/numkit/random.h"
#include "fedlora/privaudit/attacks.h"
#include "fedlora/privaudit/auc.h"
#include "fedlora/privaudit/memorization.h"
#include "fedlora/privaudit/spearman.h"
#include "fedlora/textdata/sharding.h"
#include "fedlora/textdata/synthetic.h"
#include "fedlora/textdata/tokenizer.h"
#include "support/oracles.h"

namespace fedlora::privaudit {
namespace {

using loralm::Matrix;
using textdata::tokenize;

std::vector<AttackScore> labelled(const std::vector<double>& members,
                                  const std::vector<double>& nonmembers) {
  std::vector<AttackScore> out;
  std::int64_t id = 0;
  for (double s : members) out.push_back({id++, true, s});
  for (double s : nonmembers) out.push_back({id++, false, s});
  return out;
}

// W0 = 0, b0 = 0, B = 0: every next-token distribution is uniform.
std::pair<BaseModel, LoraAdapter> uniform_model() {
  auto [base, adapter] = loralm::init_model(1, loralm::ModelConfig{});
  BaseModel flat(base.emb(), Matrix::zeros(256, base.embed_dim()),
                 std::vector<double>(256, 0.0), base.context(), 1);
  return {flat, adapter};
}

// Trains a default-size adapter on `texts` alone until it has fit them.
std::pair<BaseModel, LoraAdapter> overfit_model(const std::vector<std::string>& texts,
                                                std::size_t context, std::size_t epochs,
                                                double lr) {
  textdata::ClientShard shard;
  for (const auto& t : texts) shard.sequences.push_back(tokenize(t));
  loralm::ModelConfig mc;
  mc.context = context;
  auto [base, init] = loralm::init_model(3, mc);
  fedsim::FederationConfig cfg;
  cfg.n_clients = 1;
  cfg.rounds = epochs;
  cfg.local_epochs = 1;
  cfg.batch_size = 16;
  cfg.lr = lr;
  cfg.seed = 3;
  return {base, fedsim::train_centralized(shard, base, init, cfg)};
}

TEST(RocAuc, Examples) {
  EXPECT_EQ(roc_auc(labelled({0.9, 0.8}, {0.1})), 1.0);
  EXPECT_EQ(roc_auc(labelled({0.3, 0.3}, {0.3, 0.3, 0.3})), 0.5);
  EXPECT_EQ(roc_auc(labelled({3, 1}, {2})), 0.5);
}

TEST(RocAuc, SingleClassRejected) {
  EXPECT_THROW(roc_auc(labelled({1, 2}, {})), ParamError);
  EXPECT_THROW(roc_auc(labelled({}, {1, 2})), ParamError);
}

TEST(PrAuc, Examples) {
  EXPECT_EQ(pr_auc(labelled({0.9, 0.8}, {0.5, 0.1})), 1.0);
  EXPECT_NEAR(pr_auc(labelled({0.9, 0.7}, {0.8})), 5.0 / 6.0, 1e-15);
  EXPECT_EQ(pr_auc(labelled({10.0}, {1, 2, 3, 4})), 1.0);
  EXPECT_THROW(pr_auc(labelled({}, {1.0})), ParamError);
}

std::vector<AttackScore> random_instance(numkit::Rng& rng) {
  // Scores from a small integer range so ties are common.
  const std::size_t n = 2 + rng.uniform_index(49);
  std::vector<AttackScore> scores;
  for (std::size_t i = 0; i < n; ++i) {
    scores.push_back({static_cast<std::int64_t>(i), rng.uniform_index(2) == 1,
                      static_cast<double>(rng.uniform_index(8))});
  }
  scores[0].is_member = true;
  scores[1].is_member = false;
  return scores;
}

TEST(RocAuc, MatchesPairCountingOnRandomInstances) {
  numkit::Rng rng(numkit::derive_stream(1, 0, 0, "test:auc"));
  for (int trial = 0; trial < 200; ++trial) {
    const auto scores = random_instance(rng);
    EXPECT_NEAR(roc_auc(scores), testing::pair_count_auc(scores), 1e-12) << "trial " << trial;
  }
}

TEST(PrAuc, MatchesThresholdScanOnRandomInstances) {
  numkit::Rng rng(numkit::derive_stream(2, 0, 0, "test:auc"));
  for (int trial = 0; trial < 200; ++trial) {
    const auto scores = random_instance(rng);
    EXPECT_NEAR(pr_auc(scores), testing::threshold_scan_ap(scores), 1e-12) << "trial " << trial;
  }
}

TEST(RocAuc, MonotoneTransformAndSignFlip) {
  numkit::Rng rng(numkit::derive_stream(3, 0, 0, "test:auc"));
  for (int trial = 0; trial < 50; ++trial) {
    auto scores = random_instance(rng);
    const double base = roc_auc(scores);
    auto transformed = scores;
    for (auto& s : transformed) s.score = std::exp(0.5 * s.score) - 3.0;
    EXPECT_NEAR(roc_auc(transformed), base, 1e-12);
    for (auto& s : scores) s.score = -s.score;
    EXPECT_NEAR(roc_auc(scores), 1.0 - base, 1e-12);
  }
}

TEST(RunAttack, NullPermutationIsNearHalf) {
  // 4000 distinct 6-byte sequences.
  numkit::Rng rng(numkit::derive_stream(4, 0, 0, "test:null"));
  std::set<textdata::TokenSeq> seen;
  while (seen.size() < 4000) {
    textdata::TokenSeq s(6);
    for (auto& t : s) t = static_cast<textdata::Token>(97 + rng.uniform_index(26));
    seen.insert(s);
  }
  std::vector<textdata::TokenSeq> all(seen.begin(), seen.end());
  const std::vector<textdata::TokenSeq> members(all.begin(), all.begin() + 2000);
  const std::vector<textdata::TokenSeq> nonmembers(all.begin() + 2000, all.end());
  auto [base, adapter] = loralm::init_model(4, loralm::ModelConfig{8, 4, 2, 4.0});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    AttackParams params;
    params.null_permutation_seed = seed;
    const AucReport r =
        run_attack(base, adapter, members, nonmembers, AttackKind::kLoss, params);
    EXPECT_GE(r.roc_auc, 0.48) << "seed " << seed;
    EXPECT_LE(r.roc_auc, 0.52) << "seed " << seed;
    EXPECT_EQ(r.n_members, 2000u);
    EXPECT_EQ(r.n_nonmembers, 2000u);
  }
}

TEST(RunAttack, OverlapRejectedWithHashes) {
  auto [base, adapter] = uniform_model();
  const std::vector<textdata::TokenSeq> set{tokenize("one two"), tokenize("three")};
  try {
    run_attack(base, adapter, set, set, AttackKind::kLoss);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(content_hash(set[0])), std::string::npos);
  }
}

TEST(LossScore, UniformModel) {
  auto [base, adapter] = uniform_model();
  EXPECT_NEAR(loss_score(base, adapter, tokenize("any text at all")), -std::log(256.0), 1e-12);
  EXPECT_THROW(loss_score(base, adapter, {}), ParamError);
}

TEST(LossScore, NegatedSequenceLoss) {
  const auto [base, adapter] = testing::random_small_model(5, 8, 2, 4);
  for (const char* text : {"abc", "hello world", "zzzzzzzz"}) {
    EXPECT_EQ(loss_score(base, adapter, tokenize(text)),
              -loralm::sequence_loss(base, adapter, tokenize(text)));
  }
}

TEST(MinK, LowestFortyPercent) {
  EXPECT_EQ(mink_of_logprobs({-1, -2, -3, -4, -5}, 40.0), -4.5);
  EXPECT_EQ(mink_of_logprobs({-3, -1, -5, -2, -4}, 40.0), -4.5);
  // ceil(5 * 0.2) = 1: the single lowest.
  EXPECT_EQ(mink_of_logprobs({-1, -2, -3, -4, -5}, 20.0), -5.0);
  EXPECT_EQ(mink_of_logprobs({-1, -2, -3, -4, -5}, 1.0), -5.0);
}

TEST(MinK, ConstantLogprobsGiveTheConstant) {
  for (double k : {1.0, 20.0, 55.5, 100.0}) {
    EXPECT_EQ(mink_of_logprobs(std::vector<double>(7, -2.25), k), -2.25);
  }
}

TEST(MinK, HundredPercentIsNegatedLoss) {
  const auto [base, adapter] = testing::random_small_model(6, 8, 2, 4);
  const auto seq = tokenize("the whole list of log probabilities");
  EXPECT_NEAR(mink_score(base, adapter, seq, 100.0), -loralm::sequence_loss(base, adapter, seq),
              1e-12);
}

TEST(MinK, RangeChecked) {
  EXPECT_THROW(mink_of_logprobs({-1.0}, 0.0), ParamError);
  EXPECT_THROW(mink_of_logprobs({-1.0}, 100.5), ParamError);
  EXPECT_THROW(mink_of_logprobs({}, 20.0), ParamError);
}

std::string lcg_bytes(std::size_t n) {
  std::uint64_t x = 12345;
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    out.push_back(static_cast<char>(x >> 56));
  }
  return out;
}

std::string repeat_ab(std::size_t n) {
  std::string out;
  while (out.size() < n) out += "ab";
  return out;
}

// Lengths pinned from a zlib 1.2.x raw stream (windowBits -15, level 9).
TEST(Deflate, PinnedLengths) {
  EXPECT_EQ(deflate_raw(repeat_ab(600)).size(), 10u);
  EXPECT_EQ(deflate_raw(lcg_bytes(600)).size(), 605u);
  EXPECT_EQ(deflate_raw("").size(), 2u);
  EXPECT_EQ(deflate_raw("a").size(), 3u);
  EXPECT_LT(deflate_raw(repeat_ab(600)).size(), deflate_raw(lcg_bytes(600)).size());
}

TEST(ZlibScore, EqualCompressedLengthPreservesLossOrder) {
  const auto [base, adapter] = testing::random_small_model(7, 8, 2, 4);
  const std::vector<std::string> texts{"abcdefgh", "hgfedcba", "qwertyui", "mnbvcxzl"};
  const std::size_t z = deflate_raw(texts[0]).size();
  for (std::size_t i = 0; i < texts.size(); ++i) {
    ASSERT_EQ(deflate_raw(texts[i]).size(), z);
    for (std::size_t j = 0; j < texts.size(); ++j) {
      const auto a = tokenize(texts[i]);
      const auto b = tokenize(texts[j]);
      EXPECT_EQ(zlib_score(base, adapter, a) < zlib_score(base, adapter, b),
                loss_score(base, adapter, a) < loss_score(base, adapter, b));
    }
  }
}

TEST(ZlibScore, FiniteNegativeAndDefinition) {
  const auto [base, adapter] = testing::random_small_model(8, 8, 2, 4);
  for (const char* text : {"x", "some words here", "\xe2\x9c\x93 ok"}) {
    const auto seq = tokenize(text);
    const double s = zlib_score(base, adapter, seq);
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_LT(s, 0.0);
    const double nll = loralm::sequence_loss(base, adapter, seq) * static_cast<double>(seq.size());
    EXPECT_NEAR(s, -nll / static_cast<double>(deflate_raw(text).size()), 1e-12);
  }
}

TEST(Rouge1Recall, Examples) {
  EXPECT_EQ(rouge1_recall(tokenize("a b c"), tokenize("a b c")), 1.0);
  EXPECT_EQ(rouge1_recall(tokenize("x y"), tokenize("a b c")), 0.0);
  EXPECT_NEAR(rouge1_recall(tokenize("a b d"), tokenize("a b c")), 2.0 / 3.0, 1e-15);
  // Clipped counts: repeating a word does not earn extra credit.
  EXPECT_NEAR(rouge1_recall(tokenize("a a a a"), tokenize("a b")), 0.5, 1e-15);
  EXPECT_THROW(rouge1_recall(tokenize("a"), tokenize("  ")), ParamError);
}

TEST(CosineSim, Examples) {
  EXPECT_NEAR(cosine_sim(tokenize("a b"), tokenize("a b")).value, 1.0, 1e-15);
  EXPECT_EQ(cosine_sim(tokenize("x y"), tokenize("a b")).value, 0.0);
  EXPECT_NEAR(cosine_sim(tokenize("a a b"), tokenize("a b b")).value, 0.8, 1e-15);
  const CosineResult empty = cosine_sim(tokenize(""), tokenize("a"));
  EXPECT_TRUE(empty.degenerate);
  EXPECT_EQ(empty.value, 0.0);
}

TEST(Memorization, SelfSimilarityIsOne) {
  numkit::Rng rng(numkit::derive_stream(9, 0, 0, "test:self"));
  for (int trial = 0; trial < 30; ++trial) {
    std::string text;
    const std::size_t words = 1 + rng.uniform_index(12);
    for (std::size_t w = 0; w < words; ++w) {
      if (w > 0) text.push_back(' ');
      text += std::string(1 + rng.uniform_index(3), static_cast<char>('a' + rng.uniform_index(4)));
    }
    EXPECT_EQ(rouge1_recall(tokenize(text), tokenize(text)), 1.0);
    EXPECT_NEAR(cosine_sim(tokenize(text), tokenize(text)).value, 1.0, 1e-15);
  }
}

TEST(MemorizationEval, UntrainedUniformModelScoresZero) {
  auto [base, adapter] = uniform_model();
  const auto sessions = textdata::gen_synthetic_corpus(2, 6, {"anxiety", "grief"});
  std::vector<textdata::TokenSeq> seqs;
  for (const auto& s : sessions) seqs.push_back(tokenize(textdata::session_text(s)));
  MemorizationParams params;
  params.prompt_len = 16;
  params.gen_len = 32;
  const MemorizationReport r = memorization_eval(base, adapter, seqs, params);
  EXPECT_EQ(r.mean_rouge1_recall, 0.0);
  EXPECT_EQ(r.mean_cosine, 0.0);
  EXPECT_EQ(r.n_samples, 6u);
}

TEST(MemorizationEval, CountsAndSkips) {
  auto [base, adapter] = uniform_model();
  std::vector<textdata::TokenSeq> seqs{tokenize("too short"),
                                       tokenize("this one is comfortably long enough"),
                                       tokenize("and so is this other sentence here")};
  MemorizationParams params{4, 8, 1, 0};
  const MemorizationReport one = memorization_eval(base, adapter, seqs, params);
  EXPECT_EQ(one.n_samples, 1u);
  params.n_samples = 10;
  const MemorizationReport all = memorization_eval(base, adapter, seqs, params);
  EXPECT_EQ(all.n_samples, 2u);
  EXPECT_EQ(all.n_skipped, 1u);
  params.prompt_len = 100;
  EXPECT_THROW(memorization_eval(base, adapter, seqs, params), DataError);
}

TEST(MemorizationEval, OverfitModelRecallsEverything) {
  const auto texts = testing::distinct_window_texts(11, 3, 48, 8, 16);
  const auto [base, adapter] = overfit_model(texts, 8, 600, 1.0);
  std::vector<textdata::TokenSeq> seqs;
  for (const auto& t : texts) seqs.push_back(tokenize(t));
  const MemorizationReport r = memorization_eval(base, adapter, seqs, {16, 32, 3, 0});
  EXPECT_EQ(r.n_samples, 3u);
  EXPECT_NEAR(r.mean_rouge1_recall, 1.0, 1e-9);
  EXPECT_NEAR(r.mean_cosine, 1.0, 1e-9);
}

TEST(RunAttack, OverfitLossAttackSeparatesMembers) {
  const auto sessions = textdata::gen_synthetic_corpus(12, 20, {"anxiety"});
  std::vector<std::string> member_texts;
  std::vector<textdata::TokenSeq> members;
  std::vector<textdata::TokenSeq> nonmembers;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    const std::string text = textdata::session_text(sessions[i]);
    if (i % 2 == 0) {
      member_texts.push_back(text);
      members.push_back(tokenize(text));
    } else {
      nonmembers.push_back(tokenize(text));
    }
  }
  const auto [base, adapter] = overfit_model(member_texts, 16, 200, 1.0);
  const AucReport r = run_attack(base, adapter, members, nonmembers, AttackKind::kLoss);
  EXPECT_GT(r.roc_auc, 0.9);
  // A memorized sequence scores above an unseen random one.
  const auto random_seq = tokenize(lcg_bytes(60));
  EXPECT_GT(loss_score(base, adapter, members[0]), loss_score(base, adapter, random_seq));
}

TEST(Spearman, PerfectMonotone) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> up{2, 4, 8, 16, 32};
  const std::vector<double> down{5, 4, 3, 2, 1};
  const auto r_up = spearman(x, up);
  EXPECT_EQ(r_up.rho, 1.0);
  EXPECT_EQ(r_up.p_value, 0.0);
  EXPECT_EQ(spearman(x, down).rho, -1.0);
  EXPECT_EQ(spearman(x, down).p_value, 0.0);
}

TEST(Spearman, ProfessionalismColumn) {
  const std::vector<double> automatic{8.92, 8.09, 8.14, 8.60, 8.66, 8.40, 5.12, 8.94};
  const std::vector<double> human{8.41, 8.41, 8.11, 8.17, 8.12, 7.44, 6.31, 8.45};
  const auto r = spearman(automatic, human);
  EXPECT_NEAR(r.rho, 0.659, 0.005);
  EXPECT_NEAR(r.p_value, 0.076, 0.005);
  EXPECT_EQ(r.n, 8u);
}

// Reference values from an independent implementation (average ranks,
// t-distribution p-value) on the same inputs.
TEST(Spearman, MatchesReferenceWithTies) {
  const std::vector<double> automatic{8.92, 8.09, 8.14, 8.60, 8.66, 8.40, 5.12, 8.94};
  const std::vector<double> human{8.41, 8.41, 8.11, 8.17, 8.12, 7.44, 6.31, 8.45};
  const auto r = spearman(automatic, human);
  EXPECT_NEAR(r.rho, 0.658694, 1e-6);
  EXPECT_NEAR(r.p_value, 0.075690, 1e-6);
}

TEST(Spearman, InvariantUnderIncreasingTransforms) {
  numkit::Rng rng(numkit::derive_stream(13, 0, 0, "test:spearman"));
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + rng.uniform_index(20);
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng.uniform_index(6));
      y[i] = rng.gaussian();
    }
    x[0] = 0.0;
    x[1] = 5.0;
    const auto base = spearman(x, y);
    std::vector<double> tx = x;
    std::vector<double> ty = y;
    for (double& v : tx) v = std::exp(v);
    for (double& v : ty) v = v * v * v + 10.0;
    const auto moved = spearman(tx, ty);
    EXPECT_NEAR(moved.rho, base.rho, 1e-12);
    EXPECT_NEAR(moved.p_value, base.p_value, 1e-12);
    EXPECT_LE(std::abs(base.rho), 1.0);
    EXPECT_GE(base.p_value, 0.0);
    EXPECT_LE(base.p_value, 1.0);
  }
}

TEST(Spearman, AverageRanks) {
  const std::vector<double> v{10, 20, 20, 5};
  EXPECT_EQ(average_ranks(v), (std::vector<double>{2, 3.5, 3.5, 1}));
}

TEST(Spearman, InvalidInputs) {
  const std::vector<double> three{1, 2, 3};
  const std::vector<double> two{1, 2};
  const std::vector<double> flat{4, 4, 4};
  EXPECT_THROW(spearman(three, two), ParamError);
  EXPECT_THROW(spearman(two, two), ParamError);
  try {
    spearman(three, flat);
    FAIL() << "expected ParamError";
  } catch (const ParamError& e) {
    EXPECT_NE(std::string(e.what()).find("constant input"), std::string::npos);
  }
}

TEST(AttackNames, RoundTrip) {
  for (AttackKind k : {AttackKind::kLoss, AttackKind::kMinK, AttackKind::kZlib}) {
    EXPECT_EQ(parse_attack(attack_name(k)), k);
  }
  EXPECT_THROW(parse_attack("shadow"), ParamError);
}

}  // namespace
}  // namespace fedlora::privaudit
