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
#include <vector>

#include <gtest/gtest.h>

#include "fedlora/common/error.h"
#include "fedlora/loralm/model.h"
#include "fedlora/numkit/random.h"
#include "fedlora/textdata/tokenizer.h"
#include "support/oracles.h"

namespace fedlora::loralm {
namespace {

using numkit::Rng;

// W0 = 0 and b0 = 0: every window yields zero logits.
BaseModel uniform_base(std::size_t k, std::size_t c) {
  Rng rng(numkit::derive_stream(7, 0, 0, "test:emb"));
  return BaseModel(numkit::sample_gaussian(rng, kVocabSize, k, 1.0),
                   Matrix::zeros(kVocabSize, k), std::vector<double>(kVocabSize, 0.0),
                   c, 0);
}

LoraAdapter adapter_for(std::size_t k, std::size_t r, double alpha) {
  return LoraAdapter{Matrix::zeros(r, k), Matrix::zeros(kVocabSize, r), alpha};
}

TokenSeq random_seq(std::uint64_t seed, std::size_t n) {
  Rng rng(numkit::derive_stream(seed, 0, 0, "test:seq"));
  TokenSeq seq(n);
  for (auto& t : seq) t = static_cast<Token>(rng.uniform_index(256));
  return seq;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  }
  return m;
}

TEST(InitModel, AdaptedModelEqualsBaseAtInit) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto [base, adapter] = init_model(seed, ModelConfig{});
    const std::vector<Token> window{1, 2, 3, 4, 5, 6, 7, 8};
    EXPECT_EQ(forward(base, adapter, window),
              forward(base, zero_adapter(adapter), window));
    EXPECT_EQ(effective_weights(base, adapter), base.w0());
    EXPECT_EQ(adapter.b, Matrix::zeros(kVocabSize, 16));
    for (double v : base.b0()) EXPECT_EQ(v, 0.0);
  }
}

TEST(InitModel, SameSeedBitIdentical) {
  const auto [b1, a1] = init_model(31, ModelConfig{});
  const auto [b2, a2] = init_model(31, ModelConfig{});
  EXPECT_EQ(serialize_base(b1), serialize_base(b2));
  EXPECT_EQ(a1, a2);
  const auto [b3, a3] = init_model(32, ModelConfig{});
  EXPECT_NE(serialize_base(b1), serialize_base(b3));
}

TEST(InitModel, EntryScaleIsOneOverK) {
  const auto [base, adapter] = init_model(5, ModelConfig{64, 8, 16, 32.0});
  double ss = 0.0;
  for (double v : base.w0().data()) ss += v * v;
  EXPECT_NEAR(ss / static_cast<double>(base.w0().data().size()), 1.0 / 64.0, 0.1 / 64.0);
}

TEST(InitModel, RankMustBeBelowEmbedDim) {
  EXPECT_THROW(init_model(1, ModelConfig{8, 4, 8, 16.0}), ParamError);
  EXPECT_THROW(init_model(1, ModelConfig{8, 4, 0, 16.0}), ParamError);
  EXPECT_THROW(init_model(1, ModelConfig{8, 4, 2, 0.0}), ParamError);
}

TEST(EffectiveWeights, ZeroBGivesW0) {
  const auto [base, adapter] = init_model(2, ModelConfig{});
  EXPECT_EQ(effective_weights(base, adapter), base.w0());
}

TEST(EffectiveWeights, RankOneUnitUpdate) {
  const auto [base, unused] = init_model(3, ModelConfig{8, 4, 2, 4.0});
  LoraAdapter adapter = adapter_for(8, 1, 1.0);
  adapter.a.at(0, 0) = 1.0;
  adapter.b.at(0, 0) = 1.0;
  Matrix expected = base.w0();
  expected.at(0, 0) += 1.0;
  EXPECT_EQ(effective_weights(base, adapter), expected);
}

TEST(EffectiveWeights, AffineInBAndInA) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto [base, ad1] = testing::random_small_model(seed, 8, 2, 3);
    const auto [unused, ad2] = testing::random_small_model(seed + 100, 8, 2, 3);
    const Matrix w0 = base.w0();
    const Matrix d1 = numkit::subtract(effective_weights(base, ad1), w0);
    // Superposition in B with A fixed.
    LoraAdapter b_sum = ad1;
    b_sum.b = numkit::add(ad1.b, ad2.b);
    LoraAdapter only_b2 = ad1;
    only_b2.b = ad2.b;
    const Matrix lhs = numkit::subtract(effective_weights(base, b_sum), w0);
    const Matrix rhs = numkit::add(d1, numkit::subtract(effective_weights(base, only_b2), w0));
    EXPECT_LT(max_abs_diff(lhs, rhs), 1e-12);
    // Superposition in A with B fixed.
    LoraAdapter a_sum = ad1;
    a_sum.a = numkit::add(ad1.a, ad2.a);
    LoraAdapter only_a2 = ad1;
    only_a2.a = ad2.a;
    const Matrix lhs_a = numkit::subtract(effective_weights(base, a_sum), w0);
    const Matrix rhs_a = numkit::add(d1, numkit::subtract(effective_weights(base, only_a2), w0));
    EXPECT_LT(max_abs_diff(lhs_a, rhs_a), 1e-12);
    // Doubling B: the difference is one copy of the update.
    LoraAdapter twice = ad1;
    twice.b = numkit::scale(ad1.b, 2.0);
    const Matrix diff = numkit::subtract(effective_weights(base, twice), effective_weights(base, ad1));
    const Matrix update = numkit::scale(numkit::matmul(ad1.b, ad1.a), ad1.scale());
    EXPECT_LT(max_abs_diff(diff, update), 1e-12);
  }
}

TEST(EffectiveWeights, ShapeMismatch) {
  const auto [base, adapter] = init_model(1, ModelConfig{8, 4, 2, 4.0});
  LoraAdapter bad = adapter;
  bad.b = Matrix::zeros(kVocabSize, 3);
  EXPECT_THROW(effective_weights(base, bad), ShapeError);
}

TEST(Forward, UniformWhenLogitsZero) {
  const BaseModel base = uniform_base(8, 4);
  const std::vector<Token> window{9, 200, 0, 31};
  for (double p : forward(base, adapter_for(8, 2, 4.0), window)) {
    EXPECT_EQ(p, 1.0 / 256.0);
  }
}

TEST(Forward, SumsToOneAndPure) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [base, adapter] = testing::random_small_model(seed, 8, 2, 5);
    const TokenSeq w = random_seq(seed, 5);
    const auto p = forward(base, adapter, w);
    double sum = 0.0;
    for (double v : p) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_EQ(p, forward(base, adapter, w));
  }
}

TEST(Forward, WrongWindowLength) {
  const auto [base, adapter] = init_model(1, ModelConfig{});
  const std::vector<Token> window{1, 2};
  EXPECT_THROW(forward(base, adapter, window), ShapeError);
}

TEST(SequenceLoss, UniformModelIsLn256) {
  const BaseModel base = uniform_base(8, 3);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const TokenSeq seq = random_seq(seed, 1 + seed * 7);
    EXPECT_NEAR(sequence_loss(base, adapter_for(8, 2, 4.0), seq), std::log(256.0), 1e-12);
    for (double lp : per_token_logprobs(base, adapter_for(8, 2, 4.0), seq)) {
      EXPECT_NEAR(lp, -std::log(256.0), 1e-12);
    }
  }
}

// Two live tokens; every other logit sits at -1000 so its probability
// underflows to exactly zero and softmax reduces to a two-way logistic.
TEST(SequenceLoss, TwoTokenHandComputed) {
  const std::size_t k = 2;
  Matrix emb = Matrix::zeros(kVocabSize, k);
  emb.at(0, 0) = 1.0;
  emb.at(0, 1) = 0.5;
  Matrix w0 = Matrix::zeros(kVocabSize, k);
  w0.at(0, 0) = 2.0;
  w0.at(1, 0) = -1.0;
  w0.at(1, 1) = 2.0;
  std::vector<double> b0(kVocabSize, -1000.0);
  b0[0] = 0.0;
  b0[1] = 0.0;
  const BaseModel base(emb, w0, b0, 1, 0);
  LoraAdapter adapter = adapter_for(k, 1, 1.0);

  // Window [0] gives x = (1, 0.5): logits 2 and 0.
  EXPECT_NEAR(sequence_loss(base, adapter, {0}), std::log1p(std::exp(-2.0)), 1e-15);
  EXPECT_NEAR(sequence_loss(base, adapter, {1}), std::log1p(std::exp(2.0)), 1e-13);

  // Adapter adds 0.5 * x_0 to the logit of token 1: logits 2 and 0.5.
  adapter.a.at(0, 0) = 1.0;
  adapter.b.at(1, 0) = 0.5;
  EXPECT_NEAR(sequence_loss(base, adapter, {0}), std::log1p(std::exp(0.5 - 2.0)), 1e-15);
}

TEST(SequenceLoss, ConsistentWithPerTokenLogprobs) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto [base, adapter] = testing::random_small_model(seed, 8, 2, 4);
    const TokenSeq seq = random_seq(seed + 50, 1 + seed * 3);
    const auto lps = per_token_logprobs(base, adapter, seq);
    ASSERT_EQ(lps.size(), seq.size());
    double sum = 0.0;
    for (double lp : lps) {
      EXPECT_LE(lp, 0.0);
      sum += lp;
    }
    const double loss = sequence_loss(base, adapter, seq);
    EXPECT_GE(loss, 0.0);
    EXPECT_NEAR(loss, -sum / static_cast<double>(seq.size()), 1e-12);
  }
}

TEST(SequenceLoss, EmptySequenceRejected) {
  const auto [base, adapter] = init_model(1, ModelConfig{});
  EXPECT_THROW(sequence_loss(base, adapter, {}), ParamError);
  EXPECT_THROW(per_token_logprobs(base, adapter, {}), ParamError);
}

TEST(Grads, PerfectPredictionGivesZeroGradients) {
  const auto [rbase, adapter] = testing::random_small_model(4, 8, 2, 2);
  std::vector<double> b0(kVocabSize, 0.0);
  b0[42] = 1000.0;
  const BaseModel base(rbase.emb(), Matrix::zeros(kVocabSize, 8), b0, 2, 0);
  LoraAdapter small = adapter;
  small.b = numkit::scale(adapter.b, 1e-3);
  const std::vector<Example> batch{{{1, 2}, 42}, {{3, 3}, 42}};
  ASSERT_EQ(forward(base, small, batch[0].window)[42], 1.0);
  const GradPair g = grads(base, small, batch);
  EXPECT_EQ(g.da, Matrix::zeros(2, 8));
  EXPECT_EQ(g.db, Matrix::zeros(kVocabSize, 2));
}

TEST(Grads, MatchCentralFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    const auto [base, adapter] = testing::random_small_model(seed, 8, 2, 3);
    const auto batch = testing::random_batch(seed, 4, 3);
    const GradPair analytic = grads(base, adapter, batch);
    const GradPair numeric = testing::finite_difference_grads(base, adapter, batch, 1e-5);
    auto check = [&](const Matrix& a, const Matrix& n, const char* name) {
      for (std::size_t i = 0; i < a.data().size(); ++i) {
        const double x = a.data()[i];
        const double y = n.data()[i];
        const double denom = std::max({std::abs(x), std::abs(y), 1e-6});
        EXPECT_LT(std::abs(x - y) / denom, 1e-4)
            << name << "[" << i << "] seed " << seed << ": " << x << " vs " << y;
      }
    };
    check(analytic.da, numeric.da, "dA");
    check(analytic.db, numeric.db, "dB");
  }
}

TEST(Grads, BatchIsMeanOfSingles) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto [base, adapter] = testing::random_small_model(seed, 8, 2, 3);
    const auto batch = testing::random_batch(seed + 7, 2, 3);
    const GradPair both = grads(base, adapter, batch);
    const GradPair g0 = grads(base, adapter, std::span(batch).subspan(0, 1));
    const GradPair g1 = grads(base, adapter, std::span(batch).subspan(1, 1));
    EXPECT_LT(max_abs_diff(both.da, numkit::scale(numkit::add(g0.da, g1.da), 0.5)), 1e-14);
    EXPECT_LT(max_abs_diff(both.db, numkit::scale(numkit::add(g0.db, g1.db), 0.5)), 1e-14);
  }
}

TEST(Grads, LossSumMatchesOracle) {
  const auto [base, adapter] = testing::random_small_model(9, 8, 2, 3);
  const auto batch = testing::random_batch(9, 6, 3);
  double loss_sum = 0.0;
  grads_with_loss(base, adapter, batch, &loss_sum);
  EXPECT_NEAR(loss_sum / 6.0, testing::batch_loss(base, adapter, batch), 1e-12);
}

TEST(Grads, EmptyBatchRejected) {
  const auto [base, adapter] = init_model(1, ModelConfig{});
  EXPECT_THROW(grads(base, adapter, {}), ParamError);
}

TEST(SgdStep, IdentityCases) {
  const auto [base, adapter] = testing::random_small_model(1, 8, 2, 3);
  const auto batch = testing::random_batch(1, 4, 3);
  const GradPair g = grads(base, adapter, batch);
  EXPECT_EQ(sgd_step(adapter, g, 0.0), adapter);
  const GradPair zero{Matrix::zeros(2, 8), Matrix::zeros(kVocabSize, 2)};
  EXPECT_EQ(sgd_step(adapter, zero, 0.5), adapter);
}

TEST(SgdStep, UpdatesBothFactors) {
  const auto [base, adapter] = testing::random_small_model(1, 8, 2, 3);
  GradPair g{Matrix::zeros(2, 8), Matrix::zeros(kVocabSize, 2)};
  g.da.at(1, 3) = 2.0;
  g.db.at(200, 0) = -4.0;
  const LoraAdapter next = sgd_step(adapter, g, 0.25);
  EXPECT_EQ(next.a.at(1, 3), adapter.a.at(1, 3) - 0.5);
  EXPECT_EQ(next.b.at(200, 0), adapter.b.at(200, 0) + 1.0);
  LoraAdapter inplace = adapter;
  sgd_step_inplace(inplace, g, 0.25);
  EXPECT_EQ(inplace, next);
}

TEST(SgdStep, SmallStepDecreasesLoss) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [base, adapter] = testing::random_small_model(seed, 8, 2, 3);
    const auto batch = testing::random_batch(seed + 3, 1, 3);
    const double before = testing::batch_loss(base, adapter, batch);
    const LoraAdapter next = sgd_step(adapter, grads(base, adapter, batch), 1e-2);
    EXPECT_LT(testing::batch_loss(base, next, batch), before) << "seed " << seed;
  }
}

TEST(SgdStep, InvalidInputs) {
  const auto [base, adapter] = testing::random_small_model(1, 8, 2, 3);
  const GradPair zero{Matrix::zeros(2, 8), Matrix::zeros(kVocabSize, 2)};
  EXPECT_THROW(sgd_step(adapter, zero, -1.0), ParamError);
  EXPECT_THROW(sgd_step(adapter, zero, NAN), ParamError);
  const GradPair bad{Matrix::zeros(3, 8), Matrix::zeros(kVocabSize, 2)};
  EXPECT_THROW(sgd_step(adapter, bad, 0.1), ShapeError);
}

TEST(TrainingNeverTouchesBase, SerializedBaseUnchanged) {
  auto [base, adapter] = init_model(12, ModelConfig{});
  const std::string before = serialize_base(base);
  const TokenSeq seq = textdata::tokenize("the same words again and again");
  const auto examples = textdata::make_examples(seq, base.context());
  for (int step = 0; step < 25; ++step) {
    sgd_step_inplace(adapter, grads(base, adapter, examples), 0.5);
  }
  EXPECT_NE(adapter.b, Matrix::zeros(kVocabSize, 16));
  EXPECT_EQ(serialize_base(base), before);
}

TEST(GreedyGenerate, UniformModelEmitsTokenZero) {
  const BaseModel base = uniform_base(8, 3);
  EXPECT_EQ(greedy_generate(base, adapter_for(8, 2, 4.0), {65, 66}, 5),
            (TokenSeq(5, 0)));
}

TEST(GreedyGenerate, BiasRiggedToSeven) {
  const BaseModel uni = uniform_base(8, 3);
  std::vector<double> b0(kVocabSize, 0.0);
  b0[7] = 5.0;
  const BaseModel base(uni.emb(), uni.w0(), b0, 3, 0);
  EXPECT_EQ(greedy_generate(base, adapter_for(8, 2, 4.0), {1}, 9), (TokenSeq(9, 7)));
}

TEST(GreedyGenerate, DeterministicAndValidated) {
  const auto [base, adapter] = testing::random_small_model(6, 8, 2, 4);
  const TokenSeq prompt = random_seq(6, 10);
  const TokenSeq out = greedy_generate(base, adapter, prompt, 20);
  EXPECT_EQ(out.size(), 20u);
  EXPECT_EQ(out, greedy_generate(base, adapter, prompt, 20));
  EXPECT_THROW(greedy_generate(base, adapter, prompt, 0), ParamError);
  EXPECT_THROW(greedy_generate(base, adapter, {}, 3), ParamError);
}

// Each generated token is the argmax of forward() on the trailing window.
TEST(GreedyGenerate, AgreesWithForwardArgmax) {
  const auto [base, adapter] = testing::random_small_model(8, 8, 2, 4);
  TokenSeq text = random_seq(8, 6);
  const TokenSeq out = greedy_generate(base, adapter, text, 12);
  for (Token t : out) {
    std::vector<Token> window(4, 0);
    for (std::size_t j = 0; j < 4; ++j) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(text.size()) - 4 +
                                 static_cast<std::ptrdiff_t>(j);
      if (src >= 0) window[j] = text[static_cast<std::size_t>(src)];
    }
    const auto p = forward(base, adapter, window);
    const auto best = std::max_element(p.begin(), p.end()) - p.begin();
    EXPECT_EQ(t, best);
    text.push_back(t);
  }
}

}  // namespace
}  // namespace fedlora::loralm
