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
#include <functional>
#include <span>
#include <vector>

#include "semdr/corpus.hpp"
#include "semdr/encoder.hpp"

namespace semdr {

// dot(u, v) / (|u| |v|); ArgumentError on a zero vector or dim mismatch.
double cosine_sim(const Vec& u, const Vec& v);

// -log( e^{cos(a,p)/t} / sum_{i=1..N} (e^{cos(a,p)/t} + e^{cos(a,n_i)/t}) )
//
// The positive term appears once per negative in the denominator. Evaluated
// with a max-shifted log-sum-exp.
double contrastive_loss(const Vec& anchor, const Vec& positive, std::span<const Vec> negatives,
                        double temperature);

struct ContrastiveGradient {
  double loss = 0.0;
  Vec d_anchor;
  Vec d_positive;
  std::vector<Vec> d_negatives;
};

ContrastiveGradient contrastive_loss_grad(const Vec& anchor, const Vec& positive,
                                          std::span<const Vec> negatives, double temperature);

struct ContrastiveConfig {
  double temperature = 0.05;
  size_t negatives = 7;
  size_t epochs = 10;
  double learning_rate = 0.01;
  double dropout = 0.1;
  uint64_t seed = 0;

  void validate(size_t corpus_size) const;
};

struct ContrastiveReport {
  // Mean loss of each epoch, measured before that epoch's update.
  std::vector<double> epoch_loss;
};

// Per epoch and case: two dropout views of the case's hashed clue features
// give anchor and positive, N distinct other cases (one dropout view each)
// give negatives. One Adam step per epoch on the mean loss.
ContrastiveReport train_contrastive(HashedEncoder& encoder, const Corpus& corpus,
                                    const ContrastiveConfig& config,
                                    const std::function<void(size_t, double)>& on_epoch = {});

}  // namespace semdr
