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

#include <cstdlib>

#include "semdr/commands.hpp"
#include "semdr/config.hpp"
#include "semdr/errors.hpp"
#include "synthetic.hpp"

namespace semdr {
namespace {

using nlohmann::json;

TEST(RunConfig, DefaultsMapToPipeline) {
  const RunConfig c;
  EXPECT_EQ(c.seed(), 0u);
  EXPECT_EQ(c.output_dir(), "semdr-out");
  EXPECT_FALSE(c.path("corpus").has_value());
  const PipelineConfig p = c.pipeline(testing::synthetic_corpus({2}));
  EXPECT_EQ(p.train.epochs, 5000u);
  EXPECT_EQ(p.train.heads, 4u);
  EXPECT_EQ(p.encoder.buckets, 4096u);
  EXPECT_EQ(p.encoder.dim, 256u);
  EXPECT_DOUBLE_EQ(p.contrastive.temperature, 0.05);
  EXPECT_DOUBLE_EQ(p.train_fraction, 0.8);
  EXPECT_FALSE(p.scenario.has_value());
}

TEST(RunConfig, FileOverridesDefaults) {
  const RunConfig c = RunConfig::from_json(json::parse(R"({"version":1,"seed":9,"train":{"epochs":3}})"));
  EXPECT_EQ(c.seed(), 9u);
  const PipelineConfig p = c.pipeline(testing::synthetic_corpus({2}));
  EXPECT_EQ(p.train.epochs, 3u);
  EXPECT_DOUBLE_EQ(p.train.learning_rate, 0.01);
}

TEST(RunConfig, RejectsBadDocuments) {
  EXPECT_THROW(RunConfig::from_json(json::parse(R"({"seed":1})")), ConfigError);
  EXPECT_THROW(RunConfig::from_json(json::parse(R"({"version":2})")), ConfigError);
  EXPECT_THROW(RunConfig::from_json(json::parse(R"({"version":1,"trian":{}})")), ConfigError);
  EXPECT_THROW(RunConfig::from_json(json::parse(R"({"version":1,"train":{"epoch":3}})")), ConfigError);
  EXPECT_THROW(RunConfig::from_json(json::parse(R"({"version":1,"train":{"epochs":"x"}})"))
                   .pipeline(testing::synthetic_corpus({2})),
               ConfigError);
  EXPECT_THROW(RunConfig::load("/nonexistent/semdr.json"), ConfigError);
}

TEST(RunConfig, DottedSet) {
  RunConfig c;
  c.set("train.epochs", "12");
  c.set("paths.corpus", "data/x.jsonl");
  c.set("train.use_graph", "false");
  EXPECT_EQ(c.document()["train"]["epochs"], 12);
  EXPECT_EQ(c.path("corpus")->string(), "data/x.jsonl");
  EXPECT_EQ(c.document()["train"]["use_graph"], false);
  EXPECT_THROW(c.set("train.nothing", "1"), ConfigError);
}

TEST(RunConfig, EnvironmentSeed) {
  RunConfig c = RunConfig::from_json(json::parse(R"({"version":1,"seed":3})"));
  setenv("SEMDR_SEED", "41", 1);
  c.apply_environment();
  EXPECT_EQ(c.seed(), 41u);
  setenv("SEMDR_SEED", "x1", 1);
  EXPECT_THROW(c.apply_environment(), ConfigError);
  unsetenv("SEMDR_SEED");
}

TEST(RunConfig, ScenarioByChargeName) {
  const Corpus corpus = testing::synthetic_corpus({5});
  const RunConfig c = RunConfig::from_json(
      json::parse(R"({"version":1,"scenario":{"kind":"confusing","charge_allowlist":["theft","fraud"],"case_cap":4}})"));
  const PipelineConfig p = c.pipeline(corpus);
  ASSERT_TRUE(p.scenario.has_value());
  EXPECT_EQ(p.scenario->kind, ScenarioKind::Confusing);
  EXPECT_EQ(p.scenario->charge_allowlist->size(), 2u);
  EXPECT_EQ(p.scenario->case_cap, 4u);
  const RunConfig bad = RunConfig::from_json(
      json::parse(R"({"version":1,"scenario":{"kind":"confusing","charge_allowlist":["arson"]}})"));
  EXPECT_THROW(bad.pipeline(corpus), ConfigError);
}

TEST(Grid, NamesAndParsing) {
  EXPECT_EQ(combination_name({true, true, true}), "full");
  EXPECT_EQ(combination_name({false, true, false}), "-clue-graph");
  EXPECT_EQ(combination_name({false, false, false}), "-clue-contrastive-graph");
  EXPECT_EQ(parse_grid("full").size(), 8u);
  const auto two = parse_grid("full,-graph");
  ASSERT_EQ(two.size(), 2u);
  EXPECT_FALSE(two[1].graph);
  EXPECT_TRUE(two[1].clue);
  EXPECT_THROW(parse_grid("full,-bogus"), ConfigError);
}

}  // namespace
}  // namespace semdr
