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

#include "semdr/types.hpp"

#include "semdr/errors.hpp"

namespace semdr {

std::string_view task_name(Task t) {
  switch (t) {
    case Task::Imprisonment:
      return "imprisonment";
    case Task::Charge:
      return "charge";
    case Task::Article:
      return "article";
  }
  return "unknown";
}

std::optional<Task> parse_task(std::string_view name) {
  for (Task t : kAllTasks) {
    if (task_name(t) == name) return t;
  }
  return std::nullopt;
}

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Exact:
      return "exact";
    case Provenance::Fuzzy:
      return "fuzzy";
    case Provenance::FallbackArea:
      return "fallback_area";
  }
  return "unknown";
}

LabelId LabelVocab::intern(const std::string& text) {
  if (text.empty()) throw DataError("label surface text must be non-empty");
  auto [it, inserted] = index_.try_emplace(text, static_cast<LabelId>(entries_.size()));
  if (inserted) entries_.push_back(text);
  return it->second;
}

std::optional<LabelId> LabelVocab::find(const std::string& text) const {
  auto it = index_.find(text);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& LabelVocab::text(LabelId id) const {
  if (id >= entries_.size()) {
    throw ArgumentError("label id " + std::to_string(id) + " out of range for " +
                        std::string(task_name(task_)) + " vocabulary");
  }
  return entries_[id];
}

}  // namespace semdr
