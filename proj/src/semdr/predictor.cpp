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

#include "semdr/predictor.hpp"

#include <cmath>
#include <limits>

#include "semdr/errors.hpp"

namespace semdr {

Vec score_case(const Vec& fact, const RowMat& label_matrix) {
  if (label_matrix.cols() != fact.size()) throw ArgumentError("score_case: dimension mismatch");
  return label_matrix * fact;
}

Vec predict_proba(const Vec& logits) {
  if (logits.size() == 0) throw ArgumentError("predict_proba: empty logits");
  if (!logits.allFinite()) throw ArgumentError("predict_proba: non-finite logits");
  const Vec shifted = (logits.array() - logits.maxCoeff()).exp().matrix();
  return shifted / shifted.sum();
}

LabelId predict_label(const Vec& logits) {
  if (logits.size() == 0) throw ArgumentError("predict_label: empty logits");
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < logits.size(); ++k) {
    if (logits[k] > logits[best]) best = k;
  }
  return static_cast<LabelId>(best);
}

double ce_loss(const Vec& proba, LabelId gold) {
  if (gold >= static_cast<size_t>(proba.size())) throw ArgumentError("ce_loss: gold label out of range");
  const double p = proba[static_cast<Eigen::Index>(gold)];
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(p);
}

}  // namespace semdr
