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

#include <string>

#include "semdr/encoder.hpp"
#include "semdr/graph.hpp"
#include "semdr/types.hpp"

namespace semdr {

// Dot-product scores of one case against every label of one task.
struct TaskLogits {
  Task task = Task::Charge;
  std::string case_id;
  Vec scores;
};

// scores_k = dot(fact, label_matrix.row(k))
Vec score_case(const Vec& fact, const RowMat& label_matrix);

// Max-shifted softmax.
Vec predict_proba(const Vec& logits);

// argmax, lowest index on ties.
LabelId predict_label(const Vec& logits);

// -log proba[gold]
double ce_loss(const Vec& proba, LabelId gold);

}  // namespace semdr
