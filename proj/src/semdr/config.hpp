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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "semdr/corpus.hpp"
#include "semdr/trainer.hpp"

namespace semdr {

inline constexpr int kConfigVersion = 1;

// The run configuration: a single JSON document with a "version" field,
// merged over built-in defaults. Unknown keys are errors.
class RunConfig {
 public:
  RunConfig();
  static RunConfig from_json(const nlohmann::json& user);
  static RunConfig load(const std::filesystem::path& path);

  // Sets a dotted key ("train.epochs", "paths.corpus", ...). The value is
  // parsed as JSON when possible, otherwise taken as a string.
  void set(const std::string& dotted_key, const std::string& value);

  // SEMDR_SEED, when set, replaces the seed.
  void apply_environment();

  const nlohmann::json& document() const { return doc_; }
  std::string dump() const { return doc_.dump(2); }

  uint64_t seed() const;
  std::optional<std::filesystem::path> path(const char* name) const;
  std::filesystem::path output_dir() const;

  // Pipeline settings; scenario charge names are resolved against `corpus`.
  PipelineConfig pipeline(const Corpus& corpus) const;
  double clue_threshold() const;

  static nlohmann::json defaults();

 private:
  void validate() const;
  nlohmann::json doc_;
};

// The JSON form of a ScenarioSpec ("kind", bounds, "charge_allowlist" as
// charge names, "case_cap").
ScenarioSpec parse_scenario(const nlohmann::json& doc, const Corpus& corpus);

}  // namespace semdr
