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

#ifndef FEDLORA_LORALM_MODEL_H_
#define FEDLORA_LORALM_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fedlora/numkit/matrix.h"
#include "fedlora/textdata/tokenizer.h"

namespace fedlora::loralm {

using numkit::Matrix;
using textdata::Example;
using textdata::Token;
using textdata::TokenSeq;

inline constexpr std::size_t kVocabSize = textdata::kVocabSize;

struct ModelConfig {
  std::size_t embed_dim = 32;  // k
  std::size_t context = 8;     // c
  std::size_t rank = 16;       // r
  double alpha = 32.0;
};

// Frozen part of the language model. The context window is embedded as the
// mean of its token embeddings x, and next-token logits are W x + b0 where W
// is W0 plus the adapter's low-rank update.
//
// There are no mutating members; a BaseModel never changes once built.
class BaseModel {
 public:
  // emb and w0 are V x k with V == 256; b0 has V entries.
  BaseModel(Matrix emb, Matrix w0, std::vector<double> b0, std::size_t context,
            std::uint64_t init_seed);

  std::size_t vocab_size() const { return kVocabSize; }
  std::size_t embed_dim() const { return emb_.cols(); }
  std::size_t context() const { return context_; }
  std::uint64_t init_seed() const { return init_seed_; }
  const Matrix& emb() const { return emb_; }
  const Matrix& w0() const { return w0_; }
  std::span<const double> b0() const { return b0_; }

 private:
  Matrix emb_;
  Matrix w0_;
  std::vector<double> b0_;
  std::size_t context_;
  std::uint64_t init_seed_;
};

// Trainable low-rank update: delta W = (alpha / r) * B A, with A r x k and
// B V x r.
struct LoraAdapter {
  Matrix a;
  Matrix b;
  double alpha = 1.0;

  std::size_t rank() const { return a.rows(); }
  double scale() const { return alpha / static_cast<double>(rank()); }

  bool operator==(const LoraAdapter&) const = default;
};

struct GradPair {
  Matrix da;
  Matrix db;
};

// Checks r < min(V, k), alpha > 0 and the A/B shapes against `base`.
void validate_adapter(const BaseModel& base, const LoraAdapter& adapter);

// Emb, W0 ~ N(0, 1/k) and A ~ N(0, 1/k) from independent streams of `seed`;
// b0 = 0 and B = 0, so the adapted model starts equal to the base model.
std::pair<BaseModel, LoraAdapter> init_model(std::uint64_t seed,
                                             const ModelConfig& config);

// Same shapes and alpha as `like`, all entries zero.
LoraAdapter zero_adapter(const LoraAdapter& like);

// W0 + (alpha / r) * matmul(B, A).
Matrix effective_weights(const BaseModel& base, const LoraAdapter& adapter);

// A base model with its adapter merged into one weight matrix, for repeated
// scoring with a fixed adapter.
class AdaptedModel {
 public:
  AdaptedModel(const BaseModel& base, const LoraAdapter& adapter);

  const BaseModel& base() const { return *base_; }
  const Matrix& weights() const { return weights_; }

  // Mean embedding of the window; the window must hold context() tokens.
  std::vector<double> embed(std::span<const Token> window) const;
  std::vector<double> logits(std::span<const Token> window) const;
  std::vector<double> log_probs(std::span<const Token> window) const;
  std::vector<double> probs(std::span<const Token> window) const;

 private:
  const BaseModel* base_;
  Matrix weights_;
};

// Next-token distribution for one window.
std::vector<double> forward(const BaseModel& base, const LoraAdapter& adapter,
                            std::span<const Token> window);

// ln p(seq[i] | window_i) for every position of seq.
std::vector<double> per_token_logprobs(const BaseModel& base,
                                       const LoraAdapter& adapter,
                                       const TokenSeq& seq);

// Mean next-token cross-entropy in nats; exactly -mean(per_token_logprobs).
double sequence_loss(const BaseModel& base, const LoraAdapter& adapter,
                     const TokenSeq& seq);

// Mean over the batch of the cross-entropy gradient with respect to A and B.
GradPair grads(const BaseModel& base, const LoraAdapter& adapter,
               std::span<const Example> batch);

// As grads(), also reporting the summed cross-entropy of the batch.
GradPair grads_with_loss(const BaseModel& base, const LoraAdapter& adapter,
                         std::span<const Example> batch, double* loss_sum);

// A -= lr * dA, B -= lr * dB. lr must be finite and >= 0.
LoraAdapter sgd_step(const LoraAdapter& adapter, const GradPair& g, double lr);
void sgd_step_inplace(LoraAdapter& adapter, const GradPair& g, double lr);

// Argmax decoding of m tokens after `prompt`; ties go to the lowest id.
TokenSeq greedy_generate(const BaseModel& base, const LoraAdapter& adapter,
                         const TokenSeq& prompt, std::size_t m);

// Raw little-endian bytes of every frozen field. Two bases serialize equal
// iff they are bitwise identical.
std::string serialize_base(const BaseModel& base);

}  // namespace fedlora::loralm

#endif  // FEDLORA_LORALM_MODEL_H_
