// Copyright 2026 The SEMDR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semdr/contrastive.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "semdr/adam.hpp"
#include "semdr/errors.hpp"
#include "semdr/rng.hpp"

namespace semdr {
namespace {

constexpr uint64_t kNegativeStream = 0xc0a7a57;
constexpr uint64_t kDropoutStream = 0xd50b0;

void check_pair(const Vec& u, const Vec& v) {
  if (u.size() != v.size()) throw ArgumentError("cosine_sim: dimension mismatch");
}

// d cos(a, b) / d a
Vec cosine_grad(const Vec& a, const Vec& b, double cos, double na, double nb) {
  return b / (na * nb) - (cos / (na * na)) * a;
}

}  // namespace

double cosine_sim(const Vec& u, const Vec& v) {
  check_pair(u, v);
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) throw ArgumentError("cosine_sim: zero-norm vector");
  return u.dot(v) / (nu * nv);
}

ContrastiveGradient contrastive_loss_grad(const Vec& anchor, const Vec& positive,
                                          std::span<const Vec> negatives, double temperature) {
  if (!(temperature > 0.0)) throw ArgumentError("contrastive_loss: temperature must be positive");
  if (negatives.empty()) throw ArgumentError("contrastive_loss: need at least one negative");

  const size_t n = negatives.size();
  const double na = anchor.norm();
  const double cp = cosine_sim(anchor, positive);
  std::vector<double> cn(n);
  for (size_t i = 0; i < n; ++i) cn[i] = cosine_sim(anchor, negatives[i]);

  const double zp = cp / temperature;
  double shift = zp;
  for (double c : cn) shift = std::max(shift, c / temperature);
  const double ep = std::exp(zp - shift);
  double total = static_cast<double>(n) * ep;
  std::vector<double> en(n);
  for (size_t i = 0; i < n; ++i) {
    en[i] = std::exp(cn[i] / temperature - shift);
    total += en[i];
  }

  ContrastiveGradient g;
  g.loss = -zp + shift + std::log(total);

  const double d_cp = (static_cast<double>(n) * ep / total - 1.0) / temperature;
  const double np = positive.norm();
  g.d_anchor = d_cp * cosine_grad(anchor, positive, cp, na, np);
  g.d_positive = d_cp * cosine_grad(positive, anchor, cp, np, na);
  g.d_negatives.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const double d_cn = (en[i] / total) / temperature;
    const double nn = negatives[i].norm();
    g.d_anchor += d_cn * cosine_grad(anchor, negatives[i], cn[i], na, nn);
    g.d_negatives.push_back(d_cn * cosine_grad(negatives[i], anchor, cn[i], nn, na));
  }
  return g;
}

double contrastive_loss(const Vec& anchor, const Vec& positive, std::span<const Vec> negatives,
                        double temperature) {
  if (!(temperature > 0.0)) throw ArgumentError("contrastive_loss: temperature must be positive");
  if (negatives.empty()) throw ArgumentError("contrastive_loss: need at least one negative");
  const double zp = cosine_sim(anchor, positive) / temperature;
  std::vector<double> zn(negatives.size());
  double shift = zp;
  for (size_t i = 0; i < negatives.size(); ++i) {
    zn[i] = cosine_sim(anchor, negatives[i]) / temperature;
    shift = std::max(shift, zn[i]);
  }
  double total = static_cast<double>(negatives.size()) * std::exp(zp - shift);
  for (double z : zn) total += std::exp(z - shift);
  return -zp + shift + std::log(total);
}

void ContrastiveConfig::validate(size_t corpus_size) const {
  if (!(temperature > 0.0)) throw ConfigError("contrastive: temperature must be positive");
  if (negatives < 1) throw ConfigError("contrastive: negatives must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("contrastive: learning_rate must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("contrastive: dropout must lie in [0, 1)");
  if (negatives + 1 > corpus_size) {
    throw ConfigError("contrastive: " + std::to_string(negatives) +
                      " negatives need more than that many cases, corpus has " +
                      std::to_string(corpus_size));
  }
}

ContrastiveReport train_contrastive(HashedEncoder& encoder, const Corpus& corpus,
                                    const ContrastiveConfig& config,
                                    const std::function<void(size_t, double)>& on_epoch) {
  config.validate(corpus.size());
  ContrastiveReport report;
  if (config.epochs == 0) return report;

  const size_t n = corpus.size();
  std::vector<SparseFeatures> features;
  features.reserve(n);
  for (const auto& c : corpus.cases) {
    if (!c.clues) throw DataError("contrastive: case " + c.id + " has no clue set");
    features.push_back(encoder.featurize(join_clues(*c.clues)));
  }

  const size_t dim = encoder.dim();
  const size_t buckets = encoder.config().buckets;
  AdamState adam(dim * buckets + dim, AdamConfig{config.learning_rate});
  Mat d_projection(dim, buckets);
  Vec d_bias(dim);

  auto view = [&](size_t epoch, size_t i, size_t which) {
    return apply_dropout_noise(
        features[i], DropoutSpec{config.dropout, derive_seed(config.seed, kDropoutStream, epoch,
                                                             i * 4 + which)});
  };

  std::vector<size_t> picked;
  std::vector<char> taken(n, 0);
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    d_projection.setZero();
    d_bias.setZero();
    double loss_sum = 0.0;
    const double scale = 1.0 / static_cast<double>(n);

    for (size_t i = 0; i < n; ++i) {
      Rng rng(derive_seed(config.seed, kNegativeStream, epoch, i));
      picked.clear();
      taken[i] = 1;
      while (picked.size() < config.negatives) {
        const auto j = static_cast<size_t>(rng.uniform(n));
        if (taken[j]) continue;
        taken[j] = 1;
        picked.push_back(j);
      }
      taken[i] = 0;
      for (size_t j : picked) taken[j] = 0;

      const SparseFeatures xa = view(epoch, i, 0);
      const SparseFeatures xp = view(epoch, i, 1);
      std::vector<SparseFeatures> xn;
      xn.reserve(picked.size());
      for (size_t j : picked) xn.push_back(view(epoch, j, 2));

      const Vec ya = encoder.encode_features(xa);
      const Vec yp = encoder.encode_features(xp);
      std::vector<Vec> yn;
      yn.reserve(xn.size());
      for (const auto& x : xn) yn.push_back(encoder.encode_features(x));

      const ContrastiveGradient g = contrastive_loss_grad(ya, yp, yn, config.temperature);
      if (!std::isfinite(g.loss)) {
        throw DivergenceError("contrastive: non-finite loss at epoch " + std::to_string(epoch) +
                              ", case " + corpus.cases[i].id);
      }
      loss_sum += g.loss;
      encoder.accumulate_gradient(xa, ya, scale * g.d_anchor, d_projection, d_bias);
      encoder.accumulate_gradient(xp, yp, scale * g.d_positive, d_projection, d_bias);
      for (size_t k = 0; k < xn.size(); ++k) {
        encoder.accumulate_gradient(xn[k], yn[k], scale * g.d_negatives[k], d_projection, d_bias);
      }
    }

    const double mean = loss_sum * scale;
    report.epoch_loss.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);

    const std::span<double> params[] = {
        {encoder.projection().data(), static_cast<size_t>(encoder.projection().size())},
        {encoder.bias().data(), static_cast<size_t>(encoder.bias().size())}};
    const std::span<const double> grads[] = {
        {d_projection.data(), static_cast<size_t>(d_projection.size())},
        {d_bias.data(), static_cast<size_t>(d_bias.size())}};
    adam_step(params, grads, adam);
  }
  return report;
}

}  // namespace semdr
