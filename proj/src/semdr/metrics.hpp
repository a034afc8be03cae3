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
#include <string>
#include <vector>

#include "json.hpp"
#include "semdr/types.hpp"

namespace semdr {

// counts[gold * k + pred]
struct ConfusionMatrix {
  size_t k = 0;
  std::vector<uint64_t> counts;

  uint64_t at(size_t gold, size_t pred) const { return counts[gold * k + pred]; }
  uint64_t total() const;
};

ConfusionMatrix confusion(std::span<const LabelId> golds, std::span<const LabelId> preds, size_t k);

struct ClassMetrics {
  LabelId label = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  uint64_t support = 0;
};

struct MetricsReport {
  Task task = Task::Charge;
  double acc = 0.0;
  double mp = 0.0;
  double mr = 0.0;
  double f1 = 0.0;
  uint64_t total = 0;
  std::vector<ClassMetrics> per_class;
};

// Per-class P = tp/(tp+fp), R = tp/(tp+fn), F1 = 2PR/(P+R), each 0 on a zero
// denominator. Macro averages run over classes with gold support > 0.
MetricsReport report(std::span<const LabelId> golds, std::span<const LabelId> preds, size_t k,
                     Task task = Task::Charge);

nlohmann::ordered_json to_json(const MetricsReport& r);
nlohmann::ordered_json to_json(std::span<const MetricsReport> reports);

// "task\tacc\tmp\tmr\tf1\tsupport" header, then one row per report.
std::string metrics_tsv(std::span<const MetricsReport> reports);

struct AblationEntry {
  std::string combination;
  std::vector<MetricsReport> reports;
};

// One row per combination; per task the columns <task>_acc, _mp, _mr, _f1
// and _delta_f1 (F1 minus the reference row's F1). The reference is the row
// named "full" when present, else the first row.
std::string ablation_table(std::span<const AblationEntry> entries);

}  // namespace semdr
