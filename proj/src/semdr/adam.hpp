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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace semdr {

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moments for a flat parameter vector made of one or more tensors laid end
// to end.
struct AdamState {
  AdamConfig config;
  std::vector<double> m;
  std::vector<double> v;
  uint64_t t = 0;

  AdamState() = default;
  AdamState(size_t size, AdamConfig cfg) : config(cfg), m(size, 0.0), v(size, 0.0) {}
};

// One bias-corrected Adam update over the concatenation of `params`.
// Throws DivergenceError on a non-finite gradient (state is left untouched)
// and ArgumentError on a shape mismatch.
void adam_step(std::span<const std::span<double>> params,
               std::span<const std::span<const double>> grads, AdamState& state);

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);

}  // namespace semdr
