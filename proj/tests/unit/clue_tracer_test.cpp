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

#include <fstream>
#include <sstream>

#include "semdr/clue_tracer.hpp"
#include "semdr/errors.hpp"
#include "semdr/rng.hpp"

namespace semdr {
namespace {

const SectionAnchors kAnchors{"[S]", "[D]", "[L]", "[P]"};

Lexicon small_lexicon(std::vector<std::string> harm = {"injury"}) {
  return Lexicon({"greed"}, {"forcibly seized"}, std::move(harm), {{"court finds:", "sentencing:"}}, kAnchors);
}

TEST(SegmentSections, AllAnchors) {
  const SectionMap s = segment_sections("[S] a [D] b [L] c [P] d", kAnchors);
  EXPECT_EQ(s, (SectionMap{"a", "b", "c", "d"}));
}

TEST(SegmentSections, OnlyProcessAnchor) {
  const SectionMap s = segment_sections("preamble [P] the tail", kAnchors);
  EXPECT_EQ(s, (SectionMap{"", "", "", "the tail"}));
}

TEST(SegmentSections, NoAnchorsUsesWholeDocument) {
  const SectionMap s = segment_sections("  plain text only ", kAnchors);
  EXPECT_EQ(s, (SectionMap{"", "", "", "plain text only"}));
}

TEST(LocateSearchArea, SlicesBetweenAnchors) {
  const std::string p = "court finds: X did Y. sentencing:";
  const ByteSpan span = locate_search_area(p, {{"court finds:", "sentencing:"}});
  EXPECT_EQ(p.substr(span.begin, span.size()), "X did Y.");
}

TEST(LocateSearchArea, NoTemplateMatchUsesWholeProcess) {
  const std::string p = "nothing to see";
  const ByteSpan span = locate_search_area(p, {{"court finds:", "sentencing:"}});
  EXPECT_EQ(p.substr(span.begin, span.size()), p);
}

TEST(LocateSearchArea, EarlierTemplateWins) {
  const std::string p = "alpha: one beta: two";
  const ByteSpan span = locate_search_area(p, {{"beta:", std::nullopt}, {"alpha:", "beta:"}});
  EXPECT_EQ(p.substr(span.begin, span.size()), "two");
}

TEST(LocateSearchArea, EmptyAreaFallsThrough) {
  const std::string p = "court finds: sentencing: later";
  const ByteSpan span = locate_search_area(p, {{"court finds:", "sentencing:"}});
  EXPECT_EQ(p.substr(span.begin, span.size()), p);
}

TEST(FuzzyScore, HandComputedValues) {
  EXPECT_DOUBLE_EQ(fuzzy_score("abc", "abc"), 1.0);
  EXPECT_NEAR(fuzzy_score("abc", "abd"), 1.0 - 1.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(fuzzy_score("a", "bcd"), 0.0);
  EXPECT_NEAR(fuzzy_score("kitten", "sitting"), 1.0 - 3.0 / 7.0, 1e-12);
  // One substitution: e -> a.
  EXPECT_NEAR(fuzzy_score("greed", "gread"), 0.8, 1e-12);
}

TEST(FuzzyScore, CountsCodePointsNotBytes) {
  EXPECT_NEAR(fuzzy_score("抢劫罪", "抢夺罪"), 1.0 - 1.0 / 3.0, 1e-12);
}

std::string random_word(Rng& rng) {
  static const std::u32string alphabet = U"abcde抢劫";
  std::string s;
  const size_t n = rng.uniform(8);
  for (size_t i = 0; i < n; ++i) {
    const char32_t c = alphabet[rng.uniform(alphabet.size())];
    if (c < 0x80) {
      s.push_back(static_cast<char>(c));
    } else {
      s += c == U'抢' ? "抢" : "劫";
    }
  }
  return s;
}

TEST(FuzzyScore, SymmetricIdentityAndBounded) {
  Rng rng(77);
  for (int i = 0; i < 2000; ++i) {
    std::string a = random_word(rng), b = random_word(rng);
    if (a.empty()) a = "x";
    if (b.empty()) b = "y";
    const double ab = fuzzy_score(a, b);
    EXPECT_EQ(ab, fuzzy_score(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_EQ(fuzzy_score(a, a), 1.0);
  }
}

TEST(MatchElement, ExactHit) {
  const std::string area = "driven by greed he took it";
  const auto m = match_element(area, {"greed"}, 0.8);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->kind, MatchKind::Exact);
  EXPECT_EQ(m->score, 1.0);
  EXPECT_EQ(area.substr(m->span.begin, m->span.size()), "greed");
}

TEST(MatchElement, SingleSubstitutionAtThreshold) {
  const std::string area = "driven by gread he took it";
  const auto m = match_element(area, {"greed"}, 0.8);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->kind, MatchKind::Fuzzy);
  EXPECT_NEAR(m->score, 0.8, 1e-12);
  EXPECT_EQ(area.substr(m->span.begin, m->span.size()), "gread");
  EXPECT_FALSE(match_element(area, {"greed"}, 0.81));
}

TEST(MatchElement, FuzzyLongTerm) {
  const std::string area = "forcibly seiz3d the phone";
  const auto m = match_element(area, {"forcibly seized"}, 0.8);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->kind, MatchKind::Fuzzy);
  EXPECT_NEAR(m->score, 1.0 - 1.0 / 15.0, 1e-12);
  EXPECT_EQ(area.substr(m->span.begin, m->span.size()), "forcibly seiz3d");
}

TEST(MatchElement, ExactBeatsEarlierFuzzy) {
  const std::string area = "gread first, then greed";
  const auto m = match_element(area, {"greed"}, 0.5);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->kind, MatchKind::Exact);
  EXPECT_EQ(m->span.begin, area.rfind("greed"));
}

TEST(MatchElement, EarliestExactOccurrenceWins) {
  const std::string area = "revenge and later greed";
  const auto m = match_element(area, {"greed", "revenge"}, 0.8);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->matched_term, "revenge");
  EXPECT_EQ(m->span.begin, 0u);
}

TEST(ExtractClues, AllExact) {
  CriminalCase c;
  c.id = "x";
  c.fact_text = "[P] court finds: motivated by greed, forcibly seized the phone, causing injury sentencing: 3 years";
  const ClueSet k = extract_clues(c, small_lexicon());
  EXPECT_EQ(k.motivation, "greed");
  EXPECT_EQ(k.action, "forcibly seized");
  EXPECT_EQ(k.harm, "injury");
  EXPECT_EQ(k.motivation_source, Provenance::Exact);
  EXPECT_EQ(k.action_source, Provenance::Exact);
  EXPECT_EQ(k.harm_source, Provenance::Exact);
}

TEST(ExtractClues, MissingHarmFallsBackToArea) {
  CriminalCase c;
  c.id = "x";
  c.fact_text = "[P] court finds: motivated by greed, forcibly seized the phone. sentencing: 3 years";
  const ClueSet k = extract_clues(c, small_lexicon({"property damage"}));
  EXPECT_EQ(k.harm, "motivated by greed, forcibly seized the phone.");
  EXPECT_EQ(k.harm_source, Provenance::FallbackArea);
}

TEST(ExtractClues, TotalAndDeterministic) {
  Rng rng(5);
  const Lexicon lex = small_lexicon();
  for (int i = 0; i < 200; ++i) {
    CriminalCase c;
    c.id = "r";
    c.fact_text = random_word(rng) + " court finds: " + random_word(rng) + " " + random_word(rng);
    if (c.fact_text.find_first_not_of(' ') == std::string::npos) continue;
    const ClueSet a = extract_clues(c, lex);
    EXPECT_FALSE(a.motivation.empty());
    EXPECT_FALSE(a.action.empty());
    EXPECT_FALSE(a.harm.empty());
    EXPECT_EQ(a, extract_clues(c, lex));
  }
}

TEST(Lexicon, RejectsEmptyListsAndTerms) {
  EXPECT_THROW(Lexicon({}, {"a"}, {"b"}, {}, kAnchors), ConfigError);
  EXPECT_THROW(Lexicon({"a"}, {""}, {"b"}, {}, kAnchors), ConfigError);
  EXPECT_THROW(Lexicon({"a"}, {"b"}, {"c"}, {}, SectionAnchors{"", "[D]", "[L]", "[P]"}), ConfigError);
}

TEST(Lexicon, JsonRoundTrip) {
  const Lexicon lex = small_lexicon();
  const Lexicon back = Lexicon::from_json(nlohmann::json::parse(lex.to_json().dump()));
  EXPECT_EQ(back.to_json().dump(), lex.to_json().dump());
}

TEST(GoldenCorpus, MatchesPlantedClues) {
  const Lexicon lex = Lexicon::load(SEMDR_TEST_DATA "/golden_lexicon.json");
  std::ifstream corpus(SEMDR_TEST_DATA "/golden_corpus.jsonl");
  std::ifstream expected(SEMDR_TEST_DATA "/golden_clues.jsonl");
  std::string in_line, want;
  size_t n = 0;
  while (std::getline(corpus, in_line)) {
    ASSERT_TRUE(std::getline(expected, want));
    const auto rec = nlohmann::json::parse(in_line);
    CriminalCase c;
    c.id = rec["id"];
    c.fact_text = rec["fact"];
    trace_case(c, lex);
    EXPECT_EQ(clue_record(c).dump(), want) << c.id;
    ++n;
  }
  EXPECT_EQ(n, 20u);
}

}  // namespace
}  // namespace semdr
