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

#include <cmath>

#include "oracles.hpp"
#include "semdr/adam.hpp"
#include "semdr/checkpoint.hpp"
#include "semdr/errors.hpp"
#include "semdr/predictor.hpp"
#include "semdr/trainer.hpp"
#include "synthetic.hpp"

namespace semdr {
namespace {

TEST(Adam, FirstStep) {
  std::vector<double> theta{0.0};
  const std::vector<double> g{1.0};
  AdamState s(1, AdamConfig{});
  adam_step(theta, g, s);
  EXPECT_NEAR(theta[0], -0.01, 1e-6);
  EXPECT_NEAR(theta[0], -0.01 / (1.0 + 1e-8), 1e-15);
  EXPECT_EQ(s.t, 1u);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  std::vector<double> theta{0.3, -2.0};
  const std::vector<double> g{0.0, 0.0};
  AdamState s(2, AdamConfig{});
  adam_step(theta, g, s);
  EXPECT_EQ(theta, (std::vector<double>{0.3, -2.0}));
}

TEST(Adam, DeterministicFromSameState) {
  Rng rng(1);
  std::vector<double> a(10), g(10);
  for (double& x : a) x = rng.uniform_real(-1, 1);
  for (double& x : g) x = rng.uniform_real(-1, 1);
  std::vector<double> b = a;
  AdamState sa(10, AdamConfig{}), sb(10, AdamConfig{});
  for (int k = 0; k < 3; ++k) {
    adam_step(a, g, sa);
    adam_step(b, g, sb);
  }
  EXPECT_EQ(a, b);
}

TEST(Adam, TinyLearningRateIsContinuous) {
  Rng rng(2);
  std::vector<double> theta(50), g(50);
  for (double& x : theta) x = rng.uniform_real(-1, 1);
  for (double& x : g) x = rng.uniform_real(-5, 5);
  const std::vector<double> before = theta;
  AdamState s(50, AdamConfig{1e-12});
  adam_step(theta, g, s);
  for (size_t i = 0; i < 50; ++i) EXPECT_LT(std::abs(theta[i] - before[i]), 1e-9);
}

TEST(Adam, RejectsNonFiniteGradient) {
  std::vector<double> theta{0.0};
  const std::vector<double> g{std::nan("")};
  AdamState s(1, AdamConfig{});
  EXPECT_THROW(adam_step(theta, g, s), DivergenceError);
}

std::array<RowMat, kTaskCount> identity_labels(size_t k0, size_t k1, size_t k2, size_t dim) {
  return {RowMat::Identity(static_cast<Eigen::Index>(k0), static_cast<Eigen::Index>(dim)),
          RowMat::Identity(static_cast<Eigen::Index>(k1), static_cast<Eigen::Index>(dim)),
          RowMat::Identity(static_cast<Eigen::Index>(k2), static_cast<Eigen::Index>(dim))};
}

TEST(TotalLoss, UniformOverTwoThreeFour) {
  const RowMat facts = RowMat::Zero(3, 4);
  const std::vector<JudgmentLabels> golds(3);
  const double l = total_loss(facts, golds, identity_labels(2, 3, 4, 4), kAllTasks);
  EXPECT_NEAR(l, std::log(2.0) + std::log(3.0) + std::log(4.0), 1e-12);
  EXPECT_NEAR(l, 3.17805, 1e-5);
}

TEST(TotalLoss, ConfidentCorrectIsZero) {
  RowMat facts = RowMat::Zero(2, 3);
  facts(0, 1) = 1000.0;
  facts(1, 2) = 1000.0;
  std::vector<JudgmentLabels> golds(2);
  golds[0][Task::Charge] = 1;
  golds[1][Task::Charge] = 2;
  const std::vector<Task> charge{Task::Charge};
  EXPECT_NEAR(total_loss(facts, golds, identity_labels(3, 3, 3, 3), charge), 0.0, 1e-12);
}

TEST(TotalLoss, MatchesDirectRecomputationAndGradient) {
  Rng rng(3);
  for (int round = 0; round < 20; ++round) {
    const size_t n = 1 + rng.uniform(6);
    RowMat facts = testing::random_features(rng, n, 4);
    std::array<RowMat, kTaskCount> labels{testing::random_features(rng, 2, 4), testing::random_features(rng, 3, 4),
                                          testing::random_features(rng, 5, 4)};
    std::vector<JudgmentLabels> golds(n);
    for (auto& g : golds) {
      g[Task::Imprisonment] = static_cast<LabelId>(rng.uniform(2));
      g[Task::Charge] = static_cast<LabelId>(rng.uniform(3));
      g[Task::Article] = static_cast<LabelId>(rng.uniform(5));
    }
    double expected = 0.0;
    for (size_t i = 0; i < n; ++i) {
      for (Task t : kAllTasks) {
        const RowMat& L = labels[task_index(t)];
        std::vector<double> s(static_cast<size_t>(L.rows()));
        for (Eigen::Index k = 0; k < L.rows(); ++k) {
          for (Eigen::Index j = 0; j < 4; ++j) s[static_cast<size_t>(k)] += L(k, j) * facts(static_cast<Eigen::Index>(i), j);
        }
        expected -= std::log(testing::naive_softmax(s)[golds[i][t]]) / static_cast<double>(n);
      }
    }
    const ScoreLoss sl = score_loss_grad(facts, golds, labels, kAllTasks);
    EXPECT_NEAR(sl.loss, expected, 1e-12);

    auto f = [&] { return total_loss(facts, golds, labels, kAllTasks); };
    std::vector<std::span<double>> tensors{{facts.data(), static_cast<size_t>(facts.size())}};
    for (auto& L : labels) tensors.emplace_back(L.data(), static_cast<size_t>(L.size()));
    const auto numeric = testing::finite_differences(tensors, f, 1e-5);
    for (size_t i = 0; i < numeric[0].size(); ++i) {
      EXPECT_LE(testing::relative_error(sl.d_facts.data()[i], numeric[0][i]), 1e-6);
    }
    for (size_t t = 0; t < kTaskCount; ++t) {
      for (size_t i = 0; i < numeric[t + 1].size(); ++i) {
        EXPECT_LE(testing::relative_error(sl.d_labels[t].data()[i], numeric[t + 1][i]), 1e-6);
      }
    }
  }
}

TEST(GraphLoss, GradientMatchesFiniteDifferences) {
  Rng rng(4);
  const Corpus c = testing::random_corpus(rng, 3, 2, 2, 2);
  ReasoningGraph g = build_graph(c);
  g.features = testing::random_features(rng, g.size(), 8);
  GatParams p = GatParams::initialize(8, 2, 9);
  const GraphLoss gl = graph_loss_grad(g, p, c, kAllTasks);
  EXPECT_NEAR(gl.loss, total_loss(g, p, c, kAllTasks), 0.0);
  auto f = [&] { return total_loss(g, p, c, kAllTasks); };
  const auto numeric = testing::finite_differences(p.tensors(), f, 1e-5);
  const auto analytic = std::as_const(gl.grad).tensors();
  for (size_t t = 0; t < numeric.size(); ++t) {
    for (size_t i = 0; i < numeric[t].size(); ++i) {
      EXPECT_LE(testing::relative_error(analytic[t][i], numeric[t][i]), 1e-5);
    }
  }
}

TEST(Pipeline, LossDecreasesEarlyForMostSeeds) {
  const Corpus c = testing::synthetic_corpus({});
  const Lexicon lex = testing::synthetic_lexicon(false);
  int decreasing = 0;
  for (uint64_t seed : {1, 2, 3, 4, 5}) {
    const PipelineResult r = run_pipeline(c, &lex, testing::quick_pipeline(seed, 10));
    std::vector<double> graph;
    for (const auto& rec : r.losses) {
      if (rec.stage == "graph") graph.push_back(rec.loss);
    }
    ASSERT_EQ(graph.size(), 10u);
    if (graph.back() < graph.front()) ++decreasing;
  }
  EXPECT_GE(decreasing, 4);
}

TEST(Pipeline, ZeroEpochsStillProducesModel) {
  const Corpus c = testing::synthetic_corpus({10});
  const Lexicon lex = testing::synthetic_lexicon(false);
  const PipelineResult r = run_pipeline(c, &lex, testing::quick_pipeline(1, 0));
  const auto reports = evaluate(r.model, r.data.test);
  ASSERT_EQ(reports.size(), 3u);
  for (const auto& m : reports) {
    EXPECT_GE(m.acc, 0.0);
    EXPECT_LE(m.acc, 1.0);
  }
  EXPECT_FALSE(serialize_checkpoint(r.model).empty());
}

TEST(Pipeline, AllTogglesOffRuns) {
  const Corpus c = testing::synthetic_corpus({10});
  PipelineConfig cfg = testing::quick_pipeline(2, 20);
  cfg.train.use_clue_tracing = false;
  cfg.train.use_contrastive = false;
  cfg.train.use_graph = false;
  const PipelineResult r = run_pipeline(c, nullptr, cfg);
  EXPECT_FALSE(r.model.gat.has_value());
  EXPECT_EQ(r.model.train.use_graph, false);
  const auto reports = evaluate(r.model, r.data.test);
  EXPECT_EQ(reports.size(), 3u);
  for (const auto& x : r.data.train.cases) EXPECT_EQ(x.clues->action, x.fact_text);
}

TEST(Pipeline, SeparableCorpusIsLearned) {
  const Corpus c = testing::synthetic_corpus({});
  const Lexicon lex = testing::synthetic_lexicon(false);
  const PipelineResult r = run_pipeline(c, &lex, testing::quick_pipeline(3, 150));
  for (const auto& m : evaluate(r.model, r.data.train)) EXPECT_GE(m.acc, 0.95);
}

TEST(Pipeline, ClueTracingWithoutLexiconIsConfigError) {
  const Corpus c = testing::synthetic_corpus({10});
  EXPECT_THROW(run_pipeline(c, nullptr, testing::quick_pipeline(1, 1)), ConfigError);
}

TEST(Checkpoint, RoundTripPreservesLoss) {
  const Corpus c = testing::synthetic_corpus({12});
  const Lexicon lex = testing::synthetic_lexicon(false);
  const PipelineResult r = run_pipeline(c, &lex, testing::quick_pipeline(6, 15));
  const std::string text = serialize_checkpoint(r.model);
  const Model back = model_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(serialize_checkpoint(back), text);

  auto batch_loss = [&](const Model& m) {
    Corpus batch = r.data.train;
    RowMat facts(static_cast<Eigen::Index>(batch.size()), static_cast<Eigen::Index>(m.encoder.dim()));
    std::vector<JudgmentLabels> golds;
    for (size_t i = 0; i < batch.size(); ++i) {
      prepare_case(m, batch.cases[i]);
      facts.row(static_cast<Eigen::Index>(i)) = m.encoder.encode_fact(batch.cases[i]).transpose();
      golds.push_back(batch.cases[i].labels);
    }
    return total_loss(facts, golds, m.labels, kAllTasks);
  };
  EXPECT_EQ(batch_loss(back), batch_loss(r.model));

  ASSERT_TRUE(back.gat.has_value());
  ReasoningGraph g = build_graph(r.data.train);
  init_features(g, back.encoder, r.data.train);
  ReasoningGraph h = build_graph(r.data.train);
  init_features(h, r.model.encoder, r.data.train);
  EXPECT_EQ(total_loss(g, *back.gat, r.data.train, kAllTasks), total_loss(h, *r.model.gat, r.data.train, kAllTasks));
}

TEST(Checkpoint, RejectsWrongFormat) {
  EXPECT_THROW(model_from_json(nlohmann::json::parse(R"({"meta":{"format":"other"}})")), DataError);
  EXPECT_THROW(model_from_json(nlohmann::json::parse("[]")), DataError);
}

}  // namespace
}  // namespace semdr
