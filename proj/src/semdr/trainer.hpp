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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semdr/adam.hpp"
#include "semdr/clue_tracer.hpp"
#include "semdr/contrastive.hpp"
#include "semdr/corpus.hpp"
#include "semdr/encoder.hpp"
#include "semdr/graph.hpp"
#include "semdr/metrics.hpp"

namespace semdr {

struct TrainConfig {
  size_t epochs = 5000;
  double learning_rate = 0.01;
  std::vector<Task> tasks{kAllTasks.begin(), kAllTasks.end()};
  bool use_clue_tracing = true;
  bool use_contrastive = true;
  bool use_graph = true;
  bool freeze_encoder_after_contrastive = true;
  size_t heads = 4;
  double leaky_slope = 0.2;

  void validate() const;
};

// Everything needed to score unseen cases.
struct Model {
  std::array<LabelVocab, kTaskCount> vocabs;
  TrainConfig train;
  std::optional<Lexicon> lexicon;
  double clue_threshold = kDefaultFuzzyThreshold;
  std::string embeddings_path;  // precomputed backend only
  Encoder encoder;
  std::optional<GatParams> gat;
  // Label representations used for scoring, one row per label, per task.
  std::array<RowMat, kTaskCount> labels;
  std::optional<AdamState> optimizer;
};

// Mean over cases of the summed per-task cross-entropy of
// softmax(facts * labels[task]^T) against the gold labels.
struct ScoreLoss {
  double loss = 0.0;
  std::array<RowMat, kTaskCount> d_labels;
  RowMat d_facts;
};

ScoreLoss score_loss_grad(const RowMat& facts, std::span<const JudgmentLabels> golds,
                          const std::array<RowMat, kTaskCount>& labels, std::span<const Task> tasks);

double total_loss(const RowMat& facts, std::span<const JudgmentLabels> golds,
                  const std::array<RowMat, kTaskCount>& labels, std::span<const Task> tasks);

// The same loss with labels taken from gat_forward over the graph and facts
// from the graph's (pre-attention) fact rows.
double total_loss(const ReasoningGraph& graph, const GatParams& params, const Corpus& train,
                  std::span<const Task> tasks);

struct GraphLoss {
  double loss = 0.0;
  GatParams grad;
  RowMat d_features;  // dL / d(graph features), all nodes
};

GraphLoss graph_loss_grad(const ReasoningGraph& graph, const GatParams& params, const Corpus& train,
                          std::span<const Task> tasks);

struct PipelineConfig {
  uint64_t seed = 0;
  std::optional<ScenarioSpec> scenario;
  double train_fraction = 0.8;
  double clue_threshold = kDefaultFuzzyThreshold;
  bool precomputed = false;
  std::filesystem::path embeddings;
  HashedEncoderConfig encoder;
  ContrastiveConfig contrastive;
  TrainConfig train;
};

struct LossRecord {
  std::string stage;
  size_t epoch = 0;
  double loss = 0.0;
};

std::string loss_log_tsv(std::span<const LossRecord> records);

struct PipelineResult {
  Model model;
  CorpusSplit data;  // clue sets filled in
  std::vector<LossRecord> losses;
  std::vector<MetricsReport> validation;
};

// Scenario filter (when configured) followed by the seeded split.
CorpusSplit select_and_split(const Corpus& corpus, const PipelineConfig& config);

using LogFn = std::function<void(const std::string&)>;

// Clue tracing (or full text), contrastive pre-training and graph-enhanced
// training, each stage behind its toggle. `lexicon` may be null only when
// clue tracing is off. Set `pretrain_only` to stop after the encoder stage.
PipelineResult run_pipeline(const Corpus& corpus, const Lexicon* lexicon, const PipelineConfig& config,
                            const LogFn& log = {}, bool pretrain_only = false);

// Fills in the clue set the model expects for this case.
void prepare_case(const Model& model, CriminalCase& c);

// Per-task scores; the case must already be prepared.
Vec score(const Model& model, const CriminalCase& c, Task task);

// Metrics over the model's tasks. Cases are prepared on a copy; their gold
// labels must use the model's vocabularies.
std::vector<MetricsReport> evaluate(const Model& model, const Corpus& cases);

// Fraction of correct predictions over every (case, task) pair.
double overall_accuracy(std::span<const MetricsReport> reports);

}  // namespace semdr
