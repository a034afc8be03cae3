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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semdr {

enum class Task : uint8_t { Imprisonment = 0, Charge = 1, Article = 2 };

inline constexpr std::array<Task, 3> kAllTasks = {Task::Imprisonment, Task::Charge,
                                                  Task::Article};
inline constexpr size_t kTaskCount = 3;

inline size_t task_index(Task t) { return static_cast<size_t>(t); }
std::string_view task_name(Task t);
std::optional<Task> parse_task(std::string_view name);

using LabelId = uint32_t;

// Gold labels for the three subtasks, indexed by Task.
struct JudgmentLabels {
  std::array<LabelId, kTaskCount> ids{};

  LabelId& operator[](Task t) { return ids[task_index(t)]; }
  LabelId operator[](Task t) const { return ids[task_index(t)]; }
  bool operator==(const JudgmentLabels&) const = default;
};

// The four sections of a standard judgment document.
struct SectionMap {
  std::string statement;
  std::string date;
  std::string location;
  std::string process;

  bool operator==(const SectionMap&) const = default;
};

enum class Provenance : uint8_t { Exact, Fuzzy, FallbackArea };

std::string_view provenance_name(Provenance p);

// Motivation / action / harm clue strings extracted from a fact description.
struct ClueSet {
  std::string motivation;
  std::string action;
  std::string harm;
  Provenance motivation_source = Provenance::FallbackArea;
  Provenance action_source = Provenance::FallbackArea;
  Provenance harm_source = Provenance::FallbackArea;

  bool operator==(const ClueSet&) const = default;
};

struct CriminalCase {
  std::string id;
  std::string fact_text;
  std::optional<SectionMap> sections;
  std::optional<ClueSet> clues;
  JudgmentLabels labels;
};

// Dense label ids 0..K-1 in first-occurrence order.
class LabelVocab {
 public:
  LabelVocab() = default;
  explicit LabelVocab(Task task) : task_(task) {}

  Task task() const { return task_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Returns the id of `text`, adding it if unseen.
  LabelId intern(const std::string& text);
  std::optional<LabelId> find(const std::string& text) const;
  const std::string& text(LabelId id) const;
  const std::vector<std::string>& entries() const { return entries_; }

 private:
  Task task_ = Task::Imprisonment;
  std::vector<std::string> entries_;
  std::unordered_map<std::string, LabelId> index_;
};

}  // namespace semdr
