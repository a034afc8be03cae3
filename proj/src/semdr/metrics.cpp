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

#include "semdr/metrics.hpp"

#include <cstdio>
#include <numeric>

#include "semdr/errors.hpp"

namespace semdr {
namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), uint64_t{0});
}

ConfusionMatrix confusion(std::span<const LabelId> golds, std::span<const LabelId> preds, size_t k) {
  if (golds.size() != preds.size()) throw ArgumentError("confusion: length mismatch");
  ConfusionMatrix m{k, std::vector<uint64_t>(k * k, 0)};
  for (size_t i = 0; i < golds.size(); ++i) {
    if (golds[i] >= k || preds[i] >= k) throw ArgumentError("confusion: label id out of range");
    ++m.counts[golds[i] * k + preds[i]];
  }
  return m;
}

MetricsReport report(std::span<const LabelId> golds, std::span<const LabelId> preds, size_t k,
                     Task task) {
  if (golds.empty()) throw ArgumentError("report: empty input");
  const ConfusionMatrix m = confusion(golds, preds, k);
  MetricsReport r;
  r.task = task;
  r.total = golds.size();
  uint64_t correct = 0;
  size_t evaluated = 0;
  for (size_t c = 0; c < k; ++c) {
    uint64_t tp = m.at(c, c);
    uint64_t predicted = 0;
    uint64_t support = 0;
    for (size_t o = 0; o < k; ++o) {
      predicted += m.at(o, c);
      support += m.at(c, o);
    }
    correct += tp;
    ClassMetrics cm;
    cm.label = static_cast<LabelId>(c);
    cm.support = support;
    cm.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    cm.recall = support ? static_cast<double>(tp) / static_cast<double>(support) : 0.0;
    const double pr = cm.precision + cm.recall;
    cm.f1 = pr > 0.0 ? 2.0 * cm.precision * cm.recall / pr : 0.0;
    if (support > 0) {
      r.mp += cm.precision;
      r.mr += cm.recall;
      r.f1 += cm.f1;
      ++evaluated;
    }
    r.per_class.push_back(cm);
  }
  r.acc = static_cast<double>(correct) / static_cast<double>(r.total);
  r.mp /= static_cast<double>(evaluated);
  r.mr /= static_cast<double>(evaluated);
  r.f1 /= static_cast<double>(evaluated);
  return r;
}

nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["task"] = task_name(r.task);
  j["acc"] = r.acc;
  j["mp"] = r.mp;
  j["mr"] = r.mr;
  j["f1"] = r.f1;
  j["total"] = r.total;
  auto per_class = nlohmann::ordered_json::array();
  for (const auto& c : r.per_class) {
    per_class.push_back({{"label", c.label},
                         {"precision", c.precision},
                         {"recall", c.recall},
                         {"f1", c.f1},
                         {"support", c.support}});
  }
  j["per_class"] = std::move(per_class);
  return j;
}

nlohmann::ordered_json to_json(std::span<const MetricsReport> reports) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

std::string metrics_tsv(std::span<const MetricsReport> reports) {
  std::string out = "task\tacc\tmp\tmr\tf1\tsupport\n";
  for (const auto& r : reports) {
    out += std::string(task_name(r.task)) + "\t" + fixed(r.acc) + "\t" + fixed(r.mp) + "\t" +
           fixed(r.mr) + "\t" + fixed(r.f1) + "\t" + std::to_string(r.total) + "\n";
  }
  return out;
}

std::string ablation_table(std::span<const AblationEntry> entries) {
  if (entries.size() < 2) throw ArgumentError("ablation_table: need at least two combinations");
  std::vector<Task> tasks;
  for (const auto& r : entries.front().reports) tasks.push_back(r.task);
  if (tasks.empty()) throw ArgumentError("ablation_table: no tasks in " + entries.front().combination);

  auto find = [](const AblationEntry& e, Task t) -> const MetricsReport* {
    for (const auto& r : e.reports) {
      if (r.task == t) return &r;
    }
    return nullptr;
  };
  for (const auto& e : entries) {
    if (e.reports.size() != tasks.size()) {
      throw ArgumentError("ablation_table: combination " + e.combination + " has a different task set");
    }
    for (Task t : tasks) {
      if (!find(e, t)) {
        throw ArgumentError("ablation_table: combination " + e.combination + " is missing task " +
                            std::string(task_name(t)));
      }
    }
  }

  const AblationEntry* reference = &entries.front();
  for (const auto& e : entries) {
    if (e.combination == "full") reference = &e;
  }

  std::string out = "combination";
  for (Task t : tasks) {
    const std::string name(task_name(t));
    for (const char* col : {"_acc", "_mp", "_mr", "_f1", "_delta_f1"}) out += "\t" + name + col;
  }
  out += "\n";
  for (const auto& e : entries) {
    out += e.combination;
    for (Task t : tasks) {
      const MetricsReport& r = *find(e, t);
      out += "\t" + fixed(r.acc) + "\t" + fixed(r.mp) + "\t" + fixed(r.mr) + "\t" + fixed(r.f1) +
             "\t" + fixed(r.f1 - find(*reference, t)->f1);
    }
    out += "\n";
  }
  return out;
}

}  // namespace semdr
