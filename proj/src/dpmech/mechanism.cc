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

#include "fedlora/dpmech/mechanism.h"

#include <cmath>
#include <string>

#include "fedlora/common/error.h"
#include "fedlora/numkit/random.h"

namespace fedlora::dpmech {

namespace {

void require_update_shapes(const LoraAdapter& global,
                           const ClientUpdate& update) {
  if (!global.a.same_shape(update.da) || !global.b.same_shape(update.db)) {
    throw ShapeError("client update dA " + update.da.shape_string() + ", dB " +
                     update.db.shape_string() +
                     " does not match global adapter A " +
                     global.a.shape_string() + ", B " +
                     global.b.shape_string());
  }
}

}  // namespace

double calibrate_sigma(double epsilon, double delta, double sensitivity) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ParamError("epsilon must be in (0, inf), got " +
                     std::to_string(epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParamError("delta must be in (0, 1), got " + std::to_string(delta));
  }
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    throw ParamError("sensitivity must be in (0, inf), got " +
                     std::to_string(sensitivity));
  }
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

PrivacyParams PrivacyParams::gaussian(double epsilon, double delta,
                                      double clip_norm, double sensitivity) {
  PrivacyParams p;
  p.enabled = true;
  p.epsilon = epsilon;
  p.delta = delta;
  p.clip_norm = clip_norm;
  p.sensitivity = sensitivity;
  p.sigma = calibrate_sigma(epsilon, delta, sensitivity);
  validate(p);
  return p;
}

void validate(const PrivacyParams& params) {
  if (!params.enabled) return;
  calibrate_sigma(params.epsilon, params.delta, params.sensitivity);
  if (!(params.clip_norm > 0.0) || !std::isfinite(params.clip_norm)) {
    throw ParamError("clip norm C must be in (0, inf), got " +
                     std::to_string(params.clip_norm));
  }
  if (!(params.sigma >= 0.0) || !std::isfinite(params.sigma)) {
    throw ParamError("sigma must be in [0, inf), got " +
                     std::to_string(params.sigma));
  }
}

ClientUpdate make_update(const LoraAdapter& local, const LoraAdapter& global,
                         int client_id, int round, std::size_t sample_count) {
  return {client_id, round, numkit::subtract(local.a, global.a),
          numkit::subtract(local.b, global.b), sample_count};
}

double update_norm(const ClientUpdate& update) {
  const Matrix* tensors[] = {&update.da, &update.db};
  return numkit::global_l2_norm(std::span<const Matrix* const>(tensors));
}

ClientUpdate clip_update(const ClientUpdate& update, double clip_norm) {
  if (!(clip_norm > 0.0) || !std::isfinite(clip_norm)) {
    throw ParamError("clip norm C must be in (0, inf), got " +
                     std::to_string(clip_norm));
  }
  const double norm = update_norm(update);
  if (norm <= clip_norm) return update;
  ClientUpdate out = update;
  for (double& v : out.da.data()) v = v * clip_norm / norm;
  for (double& v : out.db.data()) v = v * clip_norm / norm;
  // Rounding can leave the result a few ulps above C. Shrinking until inside
  // keeps clipping idempotent.
  while (update_norm(out) > clip_norm) {
    for (double& v : out.da.data()) v = std::nextafter(v, 0.0);
    for (double& v : out.db.data()) v = std::nextafter(v, 0.0);
  }
  return out;
}

ClientUpdate privatize(const ClientUpdate& update, const PrivacyParams& params,
                       std::uint64_t seed) {
  validate(params);
  if (!params.enabled) return update;
  ClientUpdate out = clip_update(update, params.clip_norm);
  if (params.sigma == 0.0) return out;
  const auto client = static_cast<std::uint64_t>(out.client_id);
  const auto round = static_cast<std::uint64_t>(out.round);
  numkit::Rng rng_a(numkit::derive_stream(seed, client, round, "dp_noise:A"));
  numkit::Rng rng_b(numkit::derive_stream(seed, client, round, "dp_noise:B"));
  numkit::axpy(1.0,
               numkit::sample_gaussian(rng_a, out.da.rows(), out.da.cols(),
                                       params.sigma),
               out.da);
  numkit::axpy(1.0,
               numkit::sample_gaussian(rng_b, out.db.rows(), out.db.cols(),
                                       params.sigma),
               out.db);
  return out;
}

LoraAdapter apply_to_global(const LoraAdapter& global,
                            const ClientUpdate& update) {
  require_update_shapes(global, update);
  return {numkit::add(global.a, update.da), numkit::add(global.b, update.db),
          global.alpha};
}

}  // namespace fedlora::dpmech
