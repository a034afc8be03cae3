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

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "semdr/types.hpp"

namespace semdr {

// A set of cases plus the three label vocabularies their label ids refer to.
struct Corpus {
  std::vector<CriminalCase> cases;
  std::array<LabelVocab, kTaskCount> vocabs{LabelVocab(Task::Imprisonment),
                                            LabelVocab(Task::Charge),
                                            LabelVocab(Task::Article)};

  size_t size() const { return cases.size(); }
  bool empty() const { return cases.empty(); }
  const LabelVocab& vocab(Task t) const { return vocabs[task_index(t)]; }
  LabelVocab& vocab(Task t) { return vocabs[task_index(t)]; }
  const std::string& label_text(const CriminalCase& c, Task t) const {
    return vocab(t).text(c.labels[t]);
  }
};

// Reads the JSONL corpus format:
//   {"id": "...", "fact": "...", "sections": {...}?,
//    "labels": {"imprisonment": "...", "charge": "...", "article": "..."}}
// Throws DataError naming the 1-based line on malformed records.
Corpus load_corpus(const std::filesystem::path& path);
Corpus load_corpus(std::istream& in);

// Corpus with the same cases as `source` but vocabularies rebuilt over
// `cases` only, in first-occurrence order.
Corpus rebuild_vocabularies(const Corpus& source, std::vector<CriminalCase> cases);

enum class ScenarioKind : uint8_t { HighFrequency, LowFrequency, Confusing };

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::HighFrequency;
  uint64_t min_charge_count = 0;
  std::optional<uint64_t> max_charge_count;
  uint64_t min_article_count = 0;
  std::optional<std::set<LabelId>> charge_allowlist;
  std::optional<size_t> case_cap;

  // Charges with more than 100 cases, articles with at least 10.
  static ScenarioSpec high_frequency();
  // Charges with between 50 and 100 cases.
  static ScenarioSpec low_frequency();
  static ScenarioSpec confusing(std::set<LabelId> charges, std::optional<size_t> cap);

  void validate() const;
};

// Keeps the cases whose charge (and article) frequencies, counted on the
// input corpus, satisfy the spec. A case cap subsamples uniformly with a
// seeded partial shuffle; survivors keep their input order.
Corpus filter_scenario(const Corpus& corpus, const ScenarioSpec& spec, uint64_t seed);

struct SplitSpec {
  double train_fraction = 0.8;
  uint64_t seed = 0;
};

struct CorpusSplit {
  Corpus train;
  Corpus validation;
  Corpus test;
};

// Seeded Fisher-Yates shuffle, then floor(n * train_fraction) cases to train
// and the rest halved (validation takes the odd case). All three parts keep
// the parent vocabularies so label ids stay comparable.
CorpusSplit split(const Corpus& corpus, const SplitSpec& spec);

}  // namespace semdr
