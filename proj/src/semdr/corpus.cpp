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

#include "semdr/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_set>

#include "json.hpp"

#include "semdr/errors.hpp"
#include "semdr/rng.hpp"

namespace semdr {
namespace {

using nlohmann::json;

std::string at_line(size_t line) { return "line " + std::to_string(line) + ": "; }

const std::string& require_string(const json& obj, const char* key, size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw DataError(at_line(line) + "missing \"" + key + "\" field");
  }
  if (!it->is_string()) {
    throw DataError(at_line(line) + "field \"" + key + "\" must be a string");
  }
  return it->get_ref<const std::string&>();
}

SectionMap parse_sections(const json& obj, size_t line) {
  if (!obj.is_object()) throw DataError(at_line(line) + "\"sections\" must be an object");
  SectionMap s;
  auto get = [&](const char* key) -> std::string {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    if (!it->is_string()) {
      throw DataError(at_line(line) + "section \"" + key + "\" must be a string");
    }
    return it->get<std::string>();
  };
  s.statement = get("statement");
  s.date = get("date");
  s.location = get("location");
  s.process = get("process");
  if (s.process.empty()) {
    throw DataError(at_line(line) + "section \"process\" must be non-empty");
  }
  return s;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file " + path.string());
  return load_corpus(in);
}

Corpus load_corpus(std::istream& in) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::string text;
  size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      throw DataError(at_line(line) + "malformed JSON (" + e.what() + ")");
    }
    if (!record.is_object()) throw DataError(at_line(line) + "record must be a JSON object");

    CriminalCase c;
    c.id = require_string(record, "id", line);
    if (c.id.empty()) throw DataError(at_line(line) + "\"id\" must be non-empty");
    c.fact_text = require_string(record, "fact", line);
    if (c.fact_text.empty()) throw DataError(at_line(line) + "\"fact\" must be non-empty");
    if (auto it = record.find("sections"); it != record.end() && !it->is_null()) {
      c.sections = parse_sections(*it, line);
    }
    auto labels = record.find("labels");
    if (labels == record.end() || !labels->is_object()) {
      throw DataError(at_line(line) + "missing \"labels\" object");
    }
    for (Task t : kAllTasks) {
      const std::string key(task_name(t));
      const std::string& surface = require_string(*labels, key.c_str(), line);
      if (surface.empty()) throw DataError(at_line(line) + "label \"" + key + "\" is empty");
      c.labels[t] = corpus.vocab(t).intern(surface);
    }
    if (!seen.insert(c.id).second) {
      throw DataError(at_line(line) + "duplicate case id \"" + c.id + "\"");
    }
    corpus.cases.push_back(std::move(c));
  }
  if (in.bad()) throw DataError("I/O error while reading corpus");
  if (corpus.empty()) throw DataError("empty corpus");
  return corpus;
}

Corpus rebuild_vocabularies(const Corpus& source, std::vector<CriminalCase> cases) {
  Corpus out;
  for (auto& c : cases) {
    for (Task t : kAllTasks) {
      c.labels[t] = out.vocab(t).intern(source.vocab(t).text(c.labels[t]));
    }
  }
  out.cases = std::move(cases);
  return out;
}

ScenarioSpec ScenarioSpec::high_frequency() {
  ScenarioSpec s;
  s.kind = ScenarioKind::HighFrequency;
  s.min_charge_count = 101;
  s.min_article_count = 10;
  return s;
}

ScenarioSpec ScenarioSpec::low_frequency() {
  ScenarioSpec s;
  s.kind = ScenarioKind::LowFrequency;
  s.min_charge_count = 50;
  s.max_charge_count = 100;
  return s;
}

ScenarioSpec ScenarioSpec::confusing(std::set<LabelId> charges, std::optional<size_t> cap) {
  ScenarioSpec s;
  s.kind = ScenarioKind::Confusing;
  s.charge_allowlist = std::move(charges);
  s.case_cap = cap;
  return s;
}

void ScenarioSpec::validate() const {
  if (max_charge_count && *max_charge_count < min_charge_count) {
    throw ConfigError("scenario: max_charge_count < min_charge_count");
  }
  if (case_cap && *case_cap == 0) throw ConfigError("scenario: case_cap must be positive");
}

Corpus filter_scenario(const Corpus& corpus, const ScenarioSpec& spec, uint64_t seed) {
  spec.validate();
  if (corpus.empty()) throw DataError("filter_scenario: empty input corpus");

  std::vector<uint64_t> charge_freq(corpus.vocab(Task::Charge).size(), 0);
  std::vector<uint64_t> article_freq(corpus.vocab(Task::Article).size(), 0);
  for (const auto& c : corpus.cases) {
    ++charge_freq[c.labels[Task::Charge]];
    ++article_freq[c.labels[Task::Article]];
  }

  std::vector<size_t> kept;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const auto& c = corpus.cases[i];
    const uint64_t cf = charge_freq[c.labels[Task::Charge]];
    if (cf < spec.min_charge_count) continue;
    if (spec.max_charge_count && cf > *spec.max_charge_count) continue;
    if (article_freq[c.labels[Task::Article]] < spec.min_article_count) continue;
    if (spec.charge_allowlist && !spec.charge_allowlist->contains(c.labels[Task::Charge])) {
      continue;
    }
    kept.push_back(i);
  }

  if (spec.case_cap && kept.size() > *spec.case_cap) {
    Rng rng(derive_seed(seed, 0x5ce4a210));
    // Partial Fisher-Yates picks a uniform subset; sorting restores file order.
    for (size_t i = 0; i < *spec.case_cap; ++i) {
      size_t j = i + static_cast<size_t>(rng.uniform(kept.size() - i));
      std::swap(kept[i], kept[j]);
    }
    kept.resize(*spec.case_cap);
    std::sort(kept.begin(), kept.end());
  }

  if (kept.empty()) throw DataError("scenario filter produced an empty corpus");
  std::vector<CriminalCase> cases;
  cases.reserve(kept.size());
  for (size_t i : kept) cases.push_back(corpus.cases[i]);
  return rebuild_vocabularies(corpus, std::move(cases));
}

CorpusSplit split(const Corpus& corpus, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw ConfigError("split: train_fraction must lie in (0, 1)");
  }
  const size_t n = corpus.size();
  if (n < 3) throw DataError("split: need at least 3 cases, got " + std::to_string(n));

  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(derive_seed(spec.seed, 0x5b117));
  rng.shuffle(order);

  const auto n_train = static_cast<size_t>(std::floor(static_cast<double>(n) * spec.train_fraction));
  const size_t rest = n - n_train;
  const size_t n_val = rest - rest / 2;

  CorpusSplit out;
  for (Corpus* part : {&out.train, &out.validation, &out.test}) part->vocabs = corpus.vocabs;
  for (size_t k = 0; k < n; ++k) {
    Corpus& dst = k < n_train ? out.train : (k < n_train + n_val ? out.validation : out.test);
    dst.cases.push_back(corpus.cases[order[k]]);
  }
  return out;
}

}  // namespace semdr
