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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "semdr/text.hpp"
#include "semdr/types.hpp"

namespace semdr {

// Literal phrases that open each document section. segment_sections skips
// an empty anchor; a Lexicon requires all four.
struct SectionAnchors {
  std::string statement;
  std::string date;
  std::string location;
  std::string process;
};

// Delimits the clue search area inside the process section. A missing end
// anchor means "to the end of the text".
struct AreaTemplate {
  std::string start;
  std::optional<std::string> end;
};

class Lexicon {
 public:
  // Throws ConfigError when a term list is empty or any term/anchor is empty.
  Lexicon(std::vector<std::string> motivation, std::vector<std::string> action,
          std::vector<std::string> harm, std::vector<AreaTemplate> templates,
          SectionAnchors anchors);

  static Lexicon from_json(const nlohmann::json& doc);
  static Lexicon load(const std::filesystem::path& path);
  nlohmann::ordered_json to_json() const;

  const std::vector<std::string>& motivation_terms() const { return motivation_; }
  const std::vector<std::string>& action_terms() const { return action_; }
  const std::vector<std::string>& harm_terms() const { return harm_; }
  const std::vector<AreaTemplate>& templates() const { return templates_; }
  const SectionAnchors& anchors() const { return anchors_; }

 private:
  std::vector<std::string> motivation_;
  std::vector<std::string> action_;
  std::vector<std::string> harm_;
  std::vector<AreaTemplate> templates_;
  SectionAnchors anchors_;
};

// Splits a document on the anchors, searched in section order. Sections
// whose anchor is absent are empty; without a process anchor (or with an
// empty process tail) the whole document becomes the process section.
SectionMap segment_sections(std::string_view doc, const SectionAnchors& anchors);

// Byte span of the clue search area within `process`. The first template
// whose start anchor occurs wins; with no usable template the whole
// (trimmed) process text is returned.
ByteSpan locate_search_area(std::string_view process, const std::vector<AreaTemplate>& templates);

// Edit distance over Unicode scalar values.
size_t levenshtein(std::u32string_view a, std::u32string_view b);

// 1 - levenshtein(a, b) / max(|a|, |b|), lengths in scalar values.
double fuzzy_score(std::string_view a, std::string_view b);

enum class MatchKind : uint8_t { Exact, Fuzzy };

struct MatchResult {
  ByteSpan span;  // byte offsets into the searched area
  std::string matched_term;
  double score = 0.0;
  MatchKind kind = MatchKind::Exact;
};

inline constexpr double kDefaultFuzzyThreshold = 0.8;

// Exact pass: earliest occurrence of any term (longer term, then earlier
// term, on ties). Fuzzy pass: windows of |term|-2 .. |term|+2 scalar values
// anywhere in the area; best score wins if >= threshold (earliest span,
// then earlier term, then shorter window on ties).
std::optional<MatchResult> match_element(std::string_view area,
                                         const std::vector<std::string>& terms,
                                         double threshold);

ClueSet extract_clues(const CriminalCase& c, const Lexicon& lexicon,
                      double threshold = kDefaultFuzzyThreshold);

// Segments (when needed) and extracts clues in place.
void trace_case(CriminalCase& c, const Lexicon& lexicon, double threshold = kDefaultFuzzyThreshold);

// Clues used when lexicon tracing is switched off: the full fact text in
// every field.
ClueSet full_text_clues(const CriminalCase& c);

nlohmann::ordered_json clue_record(const CriminalCase& c);

}  // namespace semdr
