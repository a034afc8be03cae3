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

#include <set>
#include <sstream>

#include "oracles.hpp"
#include "semdr/corpus.hpp"
#include "semdr/errors.hpp"

namespace semdr {
namespace {

std::string line(const std::string& id, const std::string& charge, const std::string& article = "A1",
                 const std::string& term = "T1") {
  return R"({"id":")" + id + R"(","fact":"text of )" + id + R"(","labels":{"imprisonment":")" + term +
         R"(","charge":")" + charge + R"(","article":")" + article + R"("}})" + "\n";
}

Corpus parse(const std::string& text) {
  std::istringstream in(text);
  return load_corpus(in);
}

// Corpus with the given number of cases per charge name.
Corpus with_counts(const std::vector<std::pair<std::string, size_t>>& counts) {
  std::string text;
  size_t serial = 0;
  for (const auto& [charge, n] : counts) {
    for (size_t i = 0; i < n; ++i) text += line("c" + std::to_string(serial++), charge, "A-" + charge);
  }
  return parse(text);
}

std::set<std::string> ids(const Corpus& c) {
  std::set<std::string> out;
  for (const auto& x : c.cases) out.insert(x.id);
  return out;
}

TEST(LoadCorpus, ThreeLines) {
  const Corpus c = parse(line("a", "theft") + line("b", "fraud", "A2") + line("c", "theft"));
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.vocab(Task::Charge).size(), 2u);
  EXPECT_EQ(c.vocab(Task::Article).size(), 2u);
  EXPECT_EQ(c.vocab(Task::Imprisonment).size(), 1u);
  EXPECT_EQ(c.cases[0].id, "a");
  EXPECT_EQ(c.cases[2].id, "c");
  EXPECT_EQ(c.label_text(c.cases[1], Task::Charge), "fraud");
  EXPECT_EQ(c.cases[0].labels[Task::Charge], 0u);
  EXPECT_EQ(c.cases[1].labels[Task::Charge], 1u);
}

TEST(LoadCorpus, EmptyInputIsRejected) {
  try {
    parse("");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("empty corpus"), std::string::npos);
  }
}

TEST(LoadCorpus, MissingFieldNamesLine) {
  const std::string bad = R"({"id":"b","fact":"x","labels":{"imprisonment":"T","article":"A"}})" "\n";
  try {
    parse(line("a", "theft") + bad);
    FAIL();
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("charge"), std::string::npos) << msg;
  }
}

TEST(LoadCorpus, RejectsDuplicateIdsAndMalformedJson) {
  EXPECT_THROW(parse(line("a", "x") + line("a", "y")), DataError);
  EXPECT_THROW(parse(line("a", "x") + "{not json\n"), DataError);
  EXPECT_THROW(parse(R"({"id":"","fact":"x","labels":{"imprisonment":"T","charge":"c","article":"A"}})"), DataError);
}

TEST(LoadCorpus, ReadsSections) {
  const Corpus c = parse(
      R"({"id":"a","fact":"f","sections":{"statement":"s","date":"d","location":"l","process":"p"},)"
      R"("labels":{"imprisonment":"T","charge":"c","article":"A"}})");
  ASSERT_TRUE(c.cases[0].sections.has_value());
  EXPECT_EQ(c.cases[0].sections->process, "p");
}

TEST(FilterScenario, HighFrequencyKeepsOnlyFrequentCharge) {
  const Corpus c = with_counts({{"X", 150}, {"Y", 60}, {"Z", 20}});
  ScenarioSpec s = ScenarioSpec::high_frequency();
  s.min_charge_count = 100;
  s.min_article_count = 0;
  const Corpus out = filter_scenario(c, s, 1);
  ASSERT_EQ(out.size(), 150u);
  for (const auto& x : out.cases) EXPECT_EQ(out.label_text(x, Task::Charge), "X");
  EXPECT_EQ(out.vocab(Task::Charge).size(), 1u);
}

TEST(FilterScenario, LowFrequencyKeepsMiddleBand) {
  const Corpus c = with_counts({{"X", 150}, {"Y", 60}, {"Z", 20}});
  const Corpus out = filter_scenario(c, ScenarioSpec::low_frequency(), 1);
  ASSERT_EQ(out.size(), 60u);
  for (const auto& x : out.cases) EXPECT_EQ(out.label_text(x, Task::Charge), "Y");
}

TEST(FilterScenario, ConfusingAllowlistWithCap) {
  const Corpus c = with_counts({{"X", 150}, {"Y", 60}});
  const LabelId x = *c.vocab(Task::Charge).find("X");
  const Corpus out = filter_scenario(c, ScenarioSpec::confusing({x}, 10), 3);
  ASSERT_EQ(out.size(), 10u);
  for (const auto& k : out.cases) EXPECT_EQ(out.label_text(k, Task::Charge), "X");
  EXPECT_EQ(ids(out), ids(filter_scenario(c, ScenarioSpec::confusing({x}, 10), 3)));
}

TEST(FilterScenario, InvalidSpecsAreRejected) {
  ScenarioSpec s = ScenarioSpec::low_frequency();
  s.max_charge_count = 10;
  EXPECT_THROW(s.validate(), ConfigError);
  EXPECT_THROW(ScenarioSpec::confusing({0}, 0).validate(), ConfigError);
}

TEST(FilterScenario, HighFrequencyIsIdempotent) {
  Rng rng(11);
  for (int round = 0; round < 20; ++round) {
    std::vector<std::pair<std::string, size_t>> counts;
    for (int k = 0; k < 5; ++k) counts.emplace_back("C" + std::to_string(k), 1 + rng.uniform(200));
    const Corpus c = with_counts(counts);
    ScenarioSpec s = ScenarioSpec::high_frequency();
    s.min_article_count = 0;
    bool any = false;
    for (const auto& [name, n] : counts) any = any || n >= s.min_charge_count;
    if (!any) {
      EXPECT_THROW(filter_scenario(c, s, 5), DataError);
      continue;
    }
    const Corpus once = filter_scenario(c, s, 5);
    EXPECT_EQ(ids(filter_scenario(once, s, 5)), ids(once));
  }
}

TEST(Split, SizesForEvenAndOddRemainder) {
  SplitSpec spec{0.8, 9};
  const auto a = split(with_counts({{"X", 100}}), spec);
  EXPECT_EQ(a.train.size(), 80u);
  EXPECT_EQ(a.validation.size(), 10u);
  EXPECT_EQ(a.test.size(), 10u);
  const auto b = split(with_counts({{"X", 101}}), spec);
  EXPECT_EQ(b.train.size(), 80u);
  EXPECT_EQ(b.validation.size(), 11u);
  EXPECT_EQ(b.test.size(), 10u);
}

TEST(Split, TooSmallIsRejected) { EXPECT_THROW(split(with_counts({{"X", 2}}), {0.8, 1}), DataError); }

TEST(Split, SameSeedSameOrder) {
  const Corpus c = with_counts({{"X", 40}, {"Y", 30}});
  const auto a = split(c, {0.8, 4});
  const auto b = split(c, {0.8, 4});
  ASSERT_EQ(a.train.size(), b.train.size());
  for (size_t i = 0; i < a.train.size(); ++i) EXPECT_EQ(a.train.cases[i].id, b.train.cases[i].id);
  for (size_t i = 0; i < a.test.size(); ++i) EXPECT_EQ(a.test.cases[i].id, b.test.cases[i].id);
}

TEST(Split, IsAPartitionOfRandomCorpora) {
  Rng rng(2024);
  for (int round = 0; round < 50; ++round) {
    const size_t n = 3 + rng.uniform(300);
    Corpus c = testing::random_corpus(rng, n, 3, 4, 5);
    const double frac = rng.uniform_real(0.1, 0.95);
    const auto s = split(c, {frac, rng.next()});
    EXPECT_EQ(s.train.size() + s.validation.size() + s.test.size(), n);
    std::set<std::string> all;
    for (const Corpus* part : {&s.train, &s.validation, &s.test}) {
      for (const auto& x : part->cases) {
        EXPECT_TRUE(all.insert(x.id).second) << x.id;
        for (Task t : kAllTasks) {
          EXPECT_EQ(part->label_text(x, t), c.label_text(c.cases[std::stoul(x.id.substr(1))], t));
        }
      }
    }
  }
}

}  // namespace
}  // namespace semdr
