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

#include "semdr/clue_tracer.hpp"

#include <algorithm>
#include <fstream>

#include "semdr/errors.hpp"

namespace semdr {
namespace {

using nlohmann::json;

void require_terms(const std::vector<std::string>& terms, const char* field) {
  if (terms.empty()) throw ConfigError(std::string("lexicon: \"") + field + "\" list is empty");
  for (const auto& t : terms) {
    if (t.empty()) throw ConfigError(std::string("lexicon: empty term in \"") + field + "\"");
  }
}

std::vector<std::string> string_list(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_array()) {
    throw ConfigError(std::string("lexicon: \"") + key + "\" must be an array of strings");
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) throw ConfigError(std::string("lexicon: non-string in \"") + key + "\"");
    out.push_back(v.get<std::string>());
  }
  return out;
}

struct FuzzyCandidate {
  double score;
  size_t start;  // code point index
  size_t term;
  size_t length;  // code points

  // True when this candidate beats `other` under the fixed tie-break order.
  bool beats(const FuzzyCandidate& other) const {
    if (score != other.score) return score > other.score;
    if (start != other.start) return start < other.start;
    if (term != other.term) return term < other.term;
    return length < other.length;
  }
};

}  // namespace

Lexicon::Lexicon(std::vector<std::string> motivation, std::vector<std::string> action,
                 std::vector<std::string> harm, std::vector<AreaTemplate> templates,
                 SectionAnchors anchors)
    : motivation_(std::move(motivation)),
      action_(std::move(action)),
      harm_(std::move(harm)),
      templates_(std::move(templates)),
      anchors_(std::move(anchors)) {
  require_terms(motivation_, "motivation");
  require_terms(action_, "action");
  require_terms(harm_, "harm");
  for (const auto& t : templates_) {
    if (t.start.empty() || (t.end && t.end->empty())) {
      throw ConfigError("lexicon: template anchors must be non-empty");
    }
  }
  for (const std::string* a : {&anchors_.statement, &anchors_.date, &anchors_.location, &anchors_.process}) {
    if (a->empty()) throw ConfigError("lexicon: section anchors must be non-empty");
  }
}

Lexicon Lexicon::from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("lexicon: document must be a JSON object");
  std::vector<AreaTemplate> templates;
  if (auto it = doc.find("templates"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("lexicon: \"templates\" must be an array");
    for (const auto& t : *it) {
      if (!t.is_object() || !t.contains("start") || !t["start"].is_string()) {
        throw ConfigError("lexicon: each template needs a string \"start\"");
      }
      AreaTemplate tmpl{t["start"].get<std::string>(), std::nullopt};
      if (auto e = t.find("end"); e != t.end() && !e->is_null()) {
        if (!e->is_string()) throw ConfigError("lexicon: template \"end\" must be a string");
        tmpl.end = e->get<std::string>();
      }
      templates.push_back(std::move(tmpl));
    }
  }
  SectionAnchors anchors;
  if (auto it = doc.find("sections"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("lexicon: \"sections\" must be an object");
    auto get = [&](const char* key) {
      auto v = it->find(key);
      if (v == it->end() || v->is_null()) return std::string();
      if (!v->is_string()) throw ConfigError(std::string("lexicon: section anchor \"") + key + "\"");
      return v->get<std::string>();
    };
    anchors = {get("statement"), get("date"), get("location"), get("process")};
  }
  return Lexicon(string_list(doc, "motivation"), string_list(doc, "action"),
                 string_list(doc, "harm"), std::move(templates), std::move(anchors));
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("lexicon " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

nlohmann::ordered_json Lexicon::to_json() const {
  nlohmann::ordered_json doc;
  doc["motivation"] = motivation_;
  doc["action"] = action_;
  doc["harm"] = harm_;
  auto templates = nlohmann::ordered_json::array();
  for (const auto& t : templates_) {
    nlohmann::ordered_json item;
    item["start"] = t.start;
    if (t.end) item["end"] = *t.end;
    templates.push_back(std::move(item));
  }
  doc["templates"] = std::move(templates);
  doc["sections"] = {{"statement", anchors_.statement},
                     {"date", anchors_.date},
                     {"location", anchors_.location},
                     {"process", anchors_.process}};
  return doc;
}

SectionMap segment_sections(std::string_view doc, const SectionAnchors& anchors) {
  struct Found {
    size_t anchor_begin;
    size_t body_begin;
  };
  const std::string* ordered[] = {&anchors.statement, &anchors.date, &anchors.location,
                                  &anchors.process};
  std::optional<Found> found[4];
  size_t cursor = 0;
  for (int k = 0; k < 4; ++k) {
    const std::string& anchor = *ordered[k];
    if (anchor.empty()) continue;
    size_t pos = doc.find(anchor, cursor);
    if (pos == std::string_view::npos) continue;
    found[k] = Found{pos, pos + anchor.size()};
    cursor = pos + anchor.size();
  }

  auto body = [&](int k) -> std::string {
    if (!found[k]) return {};
    size_t end = doc.size();
    for (int next = k + 1; next < 4; ++next) {
      if (found[next]) {
        end = found[next]->anchor_begin;
        break;
      }
    }
    const size_t begin = found[k]->body_begin;
    return trim(doc.substr(begin, end - begin));
  };

  SectionMap out{body(0), body(1), body(2), body(3)};
  if (out.process.empty()) out.process = trim(doc);
  if (out.process.empty()) out.process = std::string(doc);
  return out;
}

ByteSpan locate_search_area(std::string_view process,
                            const std::vector<AreaTemplate>& templates) {
  for (const auto& t : templates) {
    size_t pos = process.find(t.start);
    if (pos == std::string_view::npos) continue;
    ByteSpan span{pos + t.start.size(), process.size()};
    if (t.end) {
      size_t end = process.find(*t.end, span.begin);
      if (end != std::string_view::npos) span.end = end;
    }
    span = trim_span(process, span);
    if (!span.empty()) return span;
  }
  ByteSpan whole = trim_span(process, {0, process.size()});
  if (whole.empty()) whole = {0, process.size()};
  return whole;
}

size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<size_t> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      const size_t up = row[j];
      const size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

double fuzzy_score(std::string_view a, std::string_view b) {
  const std::u32string ua = to_u32(a);
  const std::u32string ub = to_u32(b);
  const size_t longest = std::max(ua.size(), ub.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(ua, ub)) / static_cast<double>(longest);
}

std::optional<MatchResult> match_element(std::string_view area,
                                         const std::vector<std::string>& terms,
                                         double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ArgumentError("match_element: threshold must lie in (0, 1]");
  }

  // Exact pass.
  std::optional<MatchResult> best;
  for (const auto& term : terms) {
    if (term.empty()) continue;
    const size_t pos = area.find(term);
    if (pos == std::string_view::npos) continue;
    if (!best || pos < best->span.begin ||
        (pos == best->span.begin && term.size() > best->matched_term.size())) {
      best = MatchResult{{pos, pos + term.size()}, term, 1.0, MatchKind::Exact};
    }
  }
  if (best) return best;

  // Fuzzy pass. One DP per (term, start) yields the distance from the term to
  // every window length starting there.
  const std::vector<CodePoint> cps = decode_utf8(area);
  const size_t n = cps.size();
  std::optional<FuzzyCandidate> top;
  std::vector<size_t> prev, cur;
  for (size_t ti = 0; ti < terms.size(); ++ti) {
    const std::u32string term = to_u32(terms[ti]);
    const size_t m = term.size();
    if (m == 0) continue;
    const size_t min_len = m > 3 ? m - 2 : 1;
    const size_t max_len = m + 2;
    for (size_t s = 0; s < n; ++s) {
      const size_t span_max = std::min(max_len, n - s);
      if (span_max < min_len) break;
      // Rows: term prefix, columns: window prefix of length 0..span_max.
      prev.assign(span_max + 1, 0);
      cur.assign(span_max + 1, 0);
      for (size_t j = 0; j <= span_max; ++j) prev[j] = j;
      for (size_t i = 1; i <= m; ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= span_max; ++j) {
          const size_t cost = term[i - 1] == cps[s + j - 1].value ? 0 : 1;
          cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
        }
        std::swap(prev, cur);
      }
      for (size_t len = min_len; len <= span_max; ++len) {
        const double score =
            1.0 - static_cast<double>(prev[len]) / static_cast<double>(std::max(m, len));
        FuzzyCandidate cand{score, s, ti, len};
        if (!top || cand.beats(*top)) top = cand;
      }
    }
  }
  if (!top || top->score < threshold) return std::nullopt;

  const size_t begin = cps[top->start].offset;
  const CodePoint& last = cps[top->start + top->length - 1];
  return MatchResult{{begin, last.offset + last.length}, terms[top->term], top->score,
                     MatchKind::Fuzzy};
}

ClueSet extract_clues(const CriminalCase& c, const Lexicon& lexicon, double threshold) {
  const SectionMap sections =
      c.sections ? *c.sections : segment_sections(c.fact_text, lexicon.anchors());
  const std::string& process = sections.process;
  const ByteSpan span = locate_search_area(process, lexicon.templates());
  const std::string_view area = std::string_view(process).substr(span.begin, span.size());

  auto field = [&](const std::vector<std::string>& terms, std::string& text, Provenance& source) {
    if (auto m = match_element(area, terms, threshold)) {
      text = std::string(area.substr(m->span.begin, m->span.size()));
      source = m->kind == MatchKind::Exact ? Provenance::Exact : Provenance::Fuzzy;
    } else {
      text = std::string(area);
      source = Provenance::FallbackArea;
    }
  };

  ClueSet clues;
  field(lexicon.motivation_terms(), clues.motivation, clues.motivation_source);
  field(lexicon.action_terms(), clues.action, clues.action_source);
  field(lexicon.harm_terms(), clues.harm, clues.harm_source);
  return clues;
}

void trace_case(CriminalCase& c, const Lexicon& lexicon, double threshold) {
  if (!c.sections) c.sections = segment_sections(c.fact_text, lexicon.anchors());
  c.clues = extract_clues(c, lexicon, threshold);
}

ClueSet full_text_clues(const CriminalCase& c) {
  return ClueSet{c.fact_text,
                 c.fact_text,
                 c.fact_text,
                 Provenance::FallbackArea,
                 Provenance::FallbackArea,
                 Provenance::FallbackArea};
}

nlohmann::ordered_json clue_record(const CriminalCase& c) {
  if (!c.clues) throw ArgumentError("case " + c.id + " has no extracted clues");
  const ClueSet& k = *c.clues;
  nlohmann::ordered_json rec;
  rec["id"] = c.id;
  rec["motivation"] = k.motivation;
  rec["action"] = k.action;
  rec["harm"] = k.harm;
  rec["provenance"] = {{"motivation", provenance_name(k.motivation_source)},
                       {"action", provenance_name(k.action_source)},
                       {"harm", provenance_name(k.harm_source)}};
  return rec;
}

}  // namespace semdr
