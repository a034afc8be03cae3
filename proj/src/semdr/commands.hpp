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
#include <vector>

#include "semdr/config.hpp"
#include "semdr/metrics.hpp"
#include "semdr/trainer.hpp"

namespace semdr {

// Artifact-producing entry points behind the CLI subcommands. Output file
// names inside the configured output directory:
//   trace     clues.jsonl (unless an explicit output path is given)
//   pretrain  pretrain_checkpoint.json, pretrain_loss.tsv
//   train     checkpoint.json, loss.tsv, metrics.json, metrics.tsv
//   evaluate  metrics_<split>.json, metrics_<split>.tsv
//   ablate    ablation.tsv

// Writes one clue record per case. `in` defaults to paths.corpus.
std::filesystem::path cmd_trace(const RunConfig& config, const std::optional<std::filesystem::path>& in,
                                const std::optional<std::filesystem::path>& out, const LogFn& log = {});

PipelineResult cmd_pretrain(const RunConfig& config, const LogFn& log = {});
PipelineResult cmd_train(const RunConfig& config, const LogFn& log = {});

// Rebuilds the configured split and scores `split` ("train", "validation" or
// "test") with the checkpoint.
std::vector<MetricsReport> cmd_evaluate(const RunConfig& config, const std::filesystem::path& checkpoint,
                                        const std::string& split, const LogFn& log = {});

// One JSONL record per (case, task): {"id", "task", "pred", "proba"}.
void cmd_predict(const std::filesystem::path& checkpoint, const std::filesystem::path& in,
                 const std::filesystem::path& out, const LogFn& log = {});

struct Toggles {
  bool clue = true;
  bool contrastive = true;
  bool graph = true;
};

// "full" for all modules on; otherwise the disabled modules, e.g.
// "-clue-graph".
std::string combination_name(const Toggles& t);

// "full" selects all eight combinations; otherwise a comma-separated list of
// combination names.
std::vector<Toggles> parse_grid(const std::string& grid);

// Trains every combination with the shared seed and tabulates test metrics.
std::vector<AblationEntry> run_ablation(const RunConfig& config, const std::vector<Toggles>& grid,
                                        const LogFn& log = {});
std::string cmd_ablate(const RunConfig& config, const std::string& grid, const LogFn& log = {});

}  // namespace semdr
