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

#include "semdr/adam.hpp"

#include <cmath>

#include "semdr/errors.hpp"

namespace semdr {

void adam_step(std::span<const std::span<double>> params,
               std::span<const std::span<const double>> grads, AdamState& state) {
  if (params.size() != grads.size()) throw ArgumentError("adam_step: tensor count mismatch");
  size_t total = 0;
  for (size_t k = 0; k < params.size(); ++k) {
    if (params[k].size() != grads[k].size()) throw ArgumentError("adam_step: tensor shape mismatch");
    for (double g : grads[k]) {
      if (!std::isfinite(g)) throw DivergenceError("adam_step: non-finite gradient");
    }
    total += params[k].size();
  }
  if (total != state.m.size() || total != state.v.size()) {
    throw ArgumentError("adam_step: optimizer state does not match parameters");
  }

  const AdamConfig& c = state.config;
  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double correct1 = 1.0 - std::pow(c.beta1, t);
  const double correct2 = 1.0 - std::pow(c.beta2, t);
  size_t offset = 0;
  for (size_t k = 0; k < params.size(); ++k) {
    std::span<double> p = params[k];
    std::span<const double> g = grads[k];
    for (size_t i = 0; i < p.size(); ++i) {
      double& m = state.m[offset + i];
      double& v = state.v[offset + i];
      m = c.beta1 * m + (1.0 - c.beta1) * g[i];
      v = c.beta2 * v + (1.0 - c.beta2) * g[i] * g[i];
      const double m_hat = m / correct1;
      const double v_hat = v / correct2;
      p[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
    offset += p.size();
  }
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state) {
  const std::span<double> p[] = {params};
  const std::span<const double> g[] = {grads};
  adam_step(std::span<const std::span<double>>(p), std::span<const std::span<const double>>(g), state);
}

}  // namespace semdr
