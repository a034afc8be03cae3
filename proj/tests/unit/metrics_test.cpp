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

#include <gtest/gtest.h>

#include <sstream>

#include "semdr/errors.hpp"
#include "semdr/metrics.hpp"
#include "semdr/rng.hpp"

namespace semdr {
namespace {

using Ids = std::vector<LabelId>;

TEST(Confusion, Basics) {
  const ConfusionMatrix a = confusion(Ids{0, 1}, Ids{0, 1}, 2);
  EXPECT_EQ(a.at(0, 0), 1u);
  EXPECT_EQ(a.at(1, 1), 1u);
  EXPECT_EQ(a.at(0, 1), 0u);
  const ConfusionMatrix b = confusion(Ids{0}, Ids{1}, 2);
  EXPECT_EQ(b.at(0, 1), 1u);
  EXPECT_EQ(b.total(), 1u);
  const ConfusionMatrix e = confusion(Ids{}, Ids{}, 3);
  EXPECT_EQ(e.total(), 0u);
  EXPECT_THROW(report(Ids{}, Ids{}, 3), ArgumentError);
}

TEST(Report, HandComputedExample) {
  const MetricsReport r = report(Ids{0, 0, 1, 1}, Ids{0, 1, 1, 1}, 2);
  EXPECT_NEAR(r.acc, 0.75, 1e-12);
  EXPECT_NEAR(r.mp, (1.0 + 2.0 / 3.0) / 2.0, 1e-12);
  EXPECT_NEAR(r.mr, 0.75, 1e-12);
  EXPECT_NEAR(r.f1, (2.0 / 3.0 + 0.8) / 2.0, 1e-12);
  EXPECT_NEAR(r.mp, 0.83333, 1e-5);
  EXPECT_NEAR(r.f1, 0.73333, 1e-5);
}

TEST(Report, PerfectAndDegenerate) {
  const MetricsReport p = report(Ids{0, 1, 2, 2}, Ids{0, 1, 2, 2}, 3);
  EXPECT_EQ(p.acc, 1.0);
  EXPECT_EQ(p.mp, 1.0);
  EXPECT_EQ(p.mr, 1.0);
  EXPECT_EQ(p.f1, 1.0);
  const MetricsReport one = report(Ids{0, 0, 1, 1}, Ids{0, 0, 0, 0}, 2);
  EXPECT_NEAR(one.acc, 0.5, 1e-12);
  EXPECT_NEAR(one.mr, 0.5, 1e-12);
}

TEST(Report, ClassesWithoutSupportAreExcluded) {
  // Class 2 is predicted but never gold; class 3 never appears.
  const MetricsReport r = report(Ids{0, 1}, Ids{0, 2}, 4);
  EXPECT_NEAR(r.mr, 0.5, 1e-12);
  EXPECT_NEAR(r.mp, 0.5, 1e-12);
}

struct Random {
  Ids golds, preds;
  size_t k;
};

Random random_instance(Rng& rng) {
  Random x;
  x.k = 2 + rng.uniform(6);
  const size_t n = 1 + rng.uniform(80);
  for (size_t i = 0; i < n; ++i) {
    x.golds.push_back(static_cast<LabelId>(rng.uniform(x.k)));
    x.preds.push_back(rng.uniform(3) == 0 ? x.golds.back() : static_cast<LabelId>(rng.uniform(x.k)));
  }
  return x;
}

TEST(Report, BoundsAndAccuracyIdentity) {
  Rng rng(21);
  for (int t = 0; t < 500; ++t) {
    const Random x = random_instance(rng);
    const MetricsReport r = report(x.golds, x.preds, x.k);
    for (double v : {r.acc, r.mp, r.mr, r.f1}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    double weighted = 0.0;
    for (const auto& c : r.per_class) weighted += c.recall * static_cast<double>(c.support);
    EXPECT_NEAR(r.acc, weighted / static_cast<double>(x.golds.size()), 1e-12);
    for (const auto& c : r.per_class) {
      if (c.precision > 0 && c.recall > 0) {
        EXPECT_LE(c.f1, std::max(c.precision, c.recall) + 1e-12);
        EXPECT_GE(c.f1, std::min(c.precision, c.recall) - 1e-12);
      }
    }
  }
}

TEST(Report, InvariantUnderLabelPermutation) {
  Rng rng(22);
  for (int t = 0; t < 200; ++t) {
    Random x = random_instance(rng);
    std::vector<LabelId> perm(x.k);
    for (size_t i = 0; i < x.k; ++i) perm[i] = static_cast<LabelId>(i);
    rng.shuffle(perm);
    Ids g2, p2;
    for (LabelId v : x.golds) g2.push_back(perm[v]);
    for (LabelId v : x.preds) p2.push_back(perm[v]);
    const MetricsReport a = report(x.golds, x.preds, x.k);
    const MetricsReport b = report(g2, p2, x.k);
    EXPECT_NEAR(a.acc, b.acc, 1e-12);
    EXPECT_NEAR(a.mp, b.mp, 1e-12);
    EXPECT_NEAR(a.mr, b.mr, 1e-12);
    EXPECT_NEAR(a.f1, b.f1, 1e-12);
  }
}

TEST(MetricsTsv, HeaderAndRows) {
  std::vector<MetricsReport> rs{report(Ids{0, 0, 1, 1}, Ids{0, 1, 1, 1}, 2, Task::Charge)};
  EXPECT_EQ(metrics_tsv(rs), "task\tacc\tmp\tmr\tf1\tsupport\ncharge\t0.750000\t0.833333\t0.750000\t0.733333\t4\n");
  const auto j = to_json(rs);
  EXPECT_EQ(j[0]["task"], "charge");
  EXPECT_DOUBLE_EQ(j[0]["acc"].get<double>(), 0.75);
}

MetricsReport with_f1(Task t, double f1) {
  MetricsReport r;
  r.task = t;
  r.f1 = f1;
  return r;
}

TEST(AblationTable, RowsAndDeltas) {
  const std::vector<AblationEntry> two{{"full", {with_f1(Task::Charge, 0.9)}}, {"-graph", {with_f1(Task::Charge, 0.7)}}};
  std::istringstream in(ablation_table(two));
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "combination\tcharge_acc\tcharge_mp\tcharge_mr\tcharge_f1\tcharge_delta_f1");
  EXPECT_EQ(lines[2].substr(lines[2].rfind('\t') + 1), "-0.200000");
  EXPECT_EQ(lines[1].substr(lines[1].rfind('\t') + 1), "0.000000");
}

TEST(AblationTable, EightRows) {
  std::vector<AblationEntry> grid;
  for (const char* n : {"full", "-clue", "-contrastive", "-graph", "-clue-contrastive", "-clue-graph",
                        "-contrastive-graph", "-clue-contrastive-graph"}) {
    grid.push_back({n, {with_f1(Task::Charge, 0.5), with_f1(Task::Article, 0.4)}});
  }
  const std::string t = ablation_table(grid);
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 9);
}

TEST(AblationTable, MissingTaskNamesCombination) {
  const std::vector<AblationEntry> bad{{"full", {with_f1(Task::Charge, 0.9), with_f1(Task::Article, 0.9)}},
                                       {"-graph", {with_f1(Task::Charge, 0.7)}}};
  try {
    ablation_table(bad);
    FAIL();
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("-graph"), std::string::npos);
  }
  EXPECT_THROW(ablation_table(std::vector<AblationEntry>{{"full", {with_f1(Task::Charge, 1)}}}), ArgumentError);
}

}  // namespace
}  // namespace semdr
