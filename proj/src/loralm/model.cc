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

#include "fedlora/loralm/model.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "fedlora/common/error.h"
#include "fedlora/numkit/random.h"
#include "fedlora/numkit/softmax.h"

namespace fedlora::loralm {

namespace {

Matrix gaussian_matrix(std::uint64_t seed, std::string_view tag,
                       std::size_t rows, std::size_t cols, double sigma) {
  numkit::Rng rng(numkit::derive_stream(seed, 0, 0, tag));
  return numkit::sample_gaussian(rng, rows, cols, sigma);
}

void require_window(const BaseModel& base, std::span<const Token> window) {
  if (window.size() != base.context()) {
    throw ShapeError("window has " + std::to_string(window.size()) +
                     " tokens, model context is " +
                     std::to_string(base.context()));
  }
}

void require_nonempty(const TokenSeq& seq, const char* op) {
  if (seq.empty()) throw ParamError(std::string(op) + ": empty sequence");
}

// y = W x + b0
void affine(const Matrix& w, std::span<const double> b0,
            std::span<const double> x, std::vector<double>& y) {
  y.resize(w.rows());
  const std::size_t k = w.cols();
  for (std::size_t v = 0; v < w.rows(); ++v) {
    const double* row = &w.data()[v * k];
    double acc = 0.0;
    for (std::size_t l = 0; l < k; ++l) acc += row[l] * x[l];
    y[v] = acc + b0[v];
  }
}

}  // namespace

BaseModel::BaseModel(Matrix emb, Matrix w0, std::vector<double> b0,
                     std::size_t context, std::uint64_t init_seed)
    : emb_(std::move(emb)),
      w0_(std::move(w0)),
      b0_(std::move(b0)),
      context_(context),
      init_seed_(init_seed) {
  if (emb_.rows() != kVocabSize || w0_.rows() != kVocabSize) {
    throw ShapeError("base model: Emb and W0 must have 256 rows, got " +
                     emb_.shape_string() + " and " + w0_.shape_string());
  }
  if (!emb_.same_shape(w0_)) {
    throw ShapeError("base model: Emb " + emb_.shape_string() +
                     " and W0 " + w0_.shape_string() + " differ");
  }
  if (b0_.size() != kVocabSize) {
    throw ShapeError("base model: b0 must have 256 entries");
  }
  numkit::check_finite(b0_, "base model b0");
  if (context_ == 0) throw ParamError("base model: context must be >= 1");
}

void validate_adapter(const BaseModel& base, const LoraAdapter& adapter) {
  const std::size_t k = base.embed_dim();
  const std::size_t r = adapter.rank();
  if (r == 0 || r >= std::min(kVocabSize, k)) {
    throw ParamError("LoRA rank must satisfy 0 < r < min(256, k) = " +
                     std::to_string(std::min(kVocabSize, k)) + ", got " +
                     std::to_string(r));
  }
  if (!(adapter.alpha > 0.0) || !std::isfinite(adapter.alpha)) {
    throw ParamError("LoRA alpha must be finite and > 0");
  }
  if (adapter.a.cols() != k || adapter.b.rows() != kVocabSize ||
      adapter.b.cols() != r) {
    throw ShapeError("adapter shapes A " + adapter.a.shape_string() + ", B " +
                     adapter.b.shape_string() + " do not fit base with k=" +
                     std::to_string(k));
  }
}

std::pair<BaseModel, LoraAdapter> init_model(std::uint64_t seed,
                                             const ModelConfig& config) {
  const std::size_t k = config.embed_dim;
  const std::size_t r = config.rank;
  if (k == 0) throw ParamError("init_model: embed_dim must be >= 1");
  if (r == 0 || r >= std::min(kVocabSize, k)) {
    throw ParamError("init_model: rank must satisfy 0 < r < min(256, k) = " +
                     std::to_string(std::min(kVocabSize, k)) + ", got " +
                     std::to_string(r));
  }
  if (!(config.alpha > 0.0) || !std::isfinite(config.alpha)) {
    throw ParamError("init_model: alpha must be finite and > 0");
  }
  const double sigma = 1.0 / std::sqrt(static_cast<double>(k));
  BaseModel base(gaussian_matrix(seed, "model:emb", kVocabSize, k, sigma),
                 gaussian_matrix(seed, "model:w0", kVocabSize, k, sigma),
                 std::vector<double>(kVocabSize, 0.0), config.context, seed);
  LoraAdapter adapter{gaussian_matrix(seed, "model:lora_a", r, k, sigma),
                      Matrix(kVocabSize, r), config.alpha};
  return {std::move(base), std::move(adapter)};
}

LoraAdapter zero_adapter(const LoraAdapter& like) {
  return {Matrix(like.a.rows(), like.a.cols()),
          Matrix(like.b.rows(), like.b.cols()), like.alpha};
}

Matrix effective_weights(const BaseModel& base, const LoraAdapter& adapter) {
  validate_adapter(base, adapter);
  Matrix w = base.w0();
  numkit::axpy(adapter.scale(), numkit::matmul(adapter.b, adapter.a), w);
  return w;
}

AdaptedModel::AdaptedModel(const BaseModel& base, const LoraAdapter& adapter)
    : base_(&base), weights_(effective_weights(base, adapter)) {}

std::vector<double> AdaptedModel::embed(std::span<const Token> window) const {
  require_window(*base_, window);
  const std::size_t k = base_->embed_dim();
  std::vector<double> x(k, 0.0);
  for (Token t : window) {
    const auto row = base_->emb().row(t);
    for (std::size_t l = 0; l < k; ++l) x[l] += row[l];
  }
  const double inv = 1.0 / static_cast<double>(window.size());
  for (double& v : x) v *= inv;
  return x;
}

std::vector<double> AdaptedModel::logits(std::span<const Token> window) const {
  std::vector<double> z;
  affine(weights_, base_->b0(), embed(window), z);
  return z;
}

std::vector<double> AdaptedModel::log_probs(
    std::span<const Token> window) const {
  return numkit::log_softmax(logits(window));
}

std::vector<double> AdaptedModel::probs(std::span<const Token> window) const {
  return numkit::softmax(logits(window));
}

std::vector<double> forward(const BaseModel& base, const LoraAdapter& adapter,
                            std::span<const Token> window) {
  return AdaptedModel(base, adapter).probs(window);
}

std::vector<double> per_token_logprobs(const BaseModel& base,
                                       const LoraAdapter& adapter,
                                       const TokenSeq& seq) {
  require_nonempty(seq, "per_token_logprobs");
  const AdaptedModel model(base, adapter);
  std::vector<double> out;
  out.reserve(seq.size());
  for (const Example& ex : textdata::make_examples(seq, base.context())) {
    out.push_back(model.log_probs(ex.window)[ex.target]);
  }
  return out;
}

double sequence_loss(const BaseModel& base, const LoraAdapter& adapter,
                     const TokenSeq& seq) {
  require_nonempty(seq, "sequence_loss");
  const std::vector<double> lp = per_token_logprobs(base, adapter, seq);
  double total = 0.0;
  for (double v : lp) total += v;
  return -(total / static_cast<double>(lp.size()));
}

GradPair grads_with_loss(const BaseModel& base, const LoraAdapter& adapter,
                         std::span<const Example> batch, double* loss_sum) {
  if (batch.empty()) throw ParamError("grads: empty batch");
  const AdaptedModel model(base, adapter);
  const std::size_t k = base.embed_dim();
  const std::size_t r = adapter.rank();
  const std::size_t vocab = kVocabSize;
  const double s = adapter.scale();
  const Matrix& a = adapter.a;
  const Matrix& b = adapter.b;

  GradPair g{Matrix(r, k), Matrix(vocab, r)};
  std::vector<double> z;
  std::vector<double> u(r);
  std::vector<double> bt_err(r);
  double loss = 0.0;

  for (const Example& ex : batch) {
    const std::vector<double> x = model.embed(ex.window);
    affine(model.weights(), base.b0(), x, z);

    // z <- softmax(z) - onehot(target), accumulating -ln p(target).
    const double mx = *std::max_element(z.begin(), z.end());
    const double target_shifted = z[ex.target] - mx;
    double total = 0.0;
    for (double& v : z) {
      v = std::exp(v - mx);
      total += v;
    }
    loss -= target_shifted - std::log(total);
    for (double& v : z) v /= total;
    z[ex.target] -= 1.0;

    for (std::size_t j = 0; j < r; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < k; ++l) acc += a.at(j, l) * x[l];
      u[j] = acc;
      bt_err[j] = 0.0;
    }
    for (std::size_t v = 0; v < vocab; ++v) {
      const double e = z[v];
      if (e == 0.0) continue;
      double* db_row = &g.db.data()[v * r];
      const double* b_row = &b.data()[v * r];
      for (std::size_t j = 0; j < r; ++j) {
        db_row[j] += s * e * u[j];
        bt_err[j] += b_row[j] * e;
      }
    }
    for (std::size_t j = 0; j < r; ++j) {
      double* da_row = &g.da.data()[j * k];
      const double coef = s * bt_err[j];
      for (std::size_t l = 0; l < k; ++l) da_row[l] += coef * x[l];
    }
  }

  const double inv = 1.0 / static_cast<double>(batch.size());
  for (double& v : g.da.data()) v *= inv;
  for (double& v : g.db.data()) v *= inv;
  numkit::check_finite(g.da.data(), "grads dA");
  numkit::check_finite(g.db.data(), "grads dB");
  if (loss_sum != nullptr) *loss_sum = loss;
  return g;
}

GradPair grads(const BaseModel& base, const LoraAdapter& adapter,
               std::span<const Example> batch) {
  return grads_with_loss(base, adapter, batch, nullptr);
}

void sgd_step_inplace(LoraAdapter& adapter, const GradPair& g, double lr) {
  if (!(lr >= 0.0) || !std::isfinite(lr)) {
    throw ParamError("sgd_step: learning rate must be finite and >= 0");
  }
  if (!adapter.a.same_shape(g.da) || !adapter.b.same_shape(g.db)) {
    throw ShapeError("sgd_step: gradient shapes dA " + g.da.shape_string() +
                     ", dB " + g.db.shape_string() + " do not match A " +
                     adapter.a.shape_string() + ", B " +
                     adapter.b.shape_string());
  }
  numkit::axpy(-lr, g.da, adapter.a);
  numkit::axpy(-lr, g.db, adapter.b);
}

LoraAdapter sgd_step(const LoraAdapter& adapter, const GradPair& g,
                     double lr) {
  LoraAdapter out = adapter;
  sgd_step_inplace(out, g, lr);
  return out;
}

TokenSeq greedy_generate(const BaseModel& base, const LoraAdapter& adapter,
                         const TokenSeq& prompt, std::size_t m) {
  require_nonempty(prompt, "greedy_generate");
  if (m == 0) throw ParamError("greedy_generate: m must be >= 1");
  const AdaptedModel model(base, adapter);
  const std::size_t c = base.context();
  TokenSeq history = prompt;
  TokenSeq out;
  out.reserve(m);
  std::vector<Token> window(c);
  for (std::size_t step = 0; step < m; ++step) {
    const std::size_t have = std::min(history.size(), c);
    std::fill(window.begin(), window.end(), textdata::kPadToken);
    std::copy(history.end() - static_cast<std::ptrdiff_t>(have), history.end(),
              window.end() - static_cast<std::ptrdiff_t>(have));
    const std::vector<double> z = model.logits(window);
    // max_element returns the first maximum, i.e. the lowest token id.
    const auto best = static_cast<Token>(
        std::max_element(z.begin(), z.end()) - z.begin());
    out.push_back(best);
    history.push_back(best);
  }
  return out;
}

std::string serialize_base(const BaseModel& base) {
  std::string out;
  auto put = [&out](const void* p, std::size_t n) {
    out.append(static_cast<const char*>(p), n);
  };
  const std::uint64_t header[] = {base.vocab_size(), base.embed_dim(),
                                  base.context(), base.init_seed()};
  put(header, sizeof(header));
  put(base.emb().data().data(), base.emb().size() * sizeof(double));
  put(base.w0().data().data(), base.w0().size() * sizeof(double));
  put(base.b0().data(), base.b0().size() * sizeof(double));
  return out;
}

}  // namespace fedlora::loralm
