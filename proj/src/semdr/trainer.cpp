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

#include "semdr/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "semdr/errors.hpp"
#include "semdr/predictor.hpp"
#include "semdr/rng.hpp"

namespace semdr {
namespace {

constexpr uint64_t kEncoderInitStream = 0xe1;
constexpr uint64_t kContrastiveStream = 0xc1;
constexpr uint64_t kGraphInitStream = 0x61;
constexpr uint64_t kScenarioStream = 0x5c;

// Re-throws any pipeline error with the stage name prefixed, keeping its
// category.
template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  auto prefix = [stage](const std::exception& e) {
    return std::string("stage ") + stage + ": " + e.what();
  };
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(prefix(e));
  } catch (const DataError& e) {
    throw DataError(prefix(e));
  } catch (const DivergenceError& e) {
    throw DivergenceError(prefix(e));
  } catch (const ArgumentError& e) {
    throw ArgumentError(prefix(e));
  }
}

std::vector<JudgmentLabels> gold_labels(const Corpus& corpus) {
  std::vector<JudgmentLabels> out;
  out.reserve(corpus.size());
  for (const auto& c : corpus.cases) out.push_back(c.labels);
  return out;
}

std::array<RowMat, kTaskCount> encode_label_matrices(const Encoder& encoder,
                                                     const std::array<LabelVocab, kTaskCount>& vocabs) {
  std::array<RowMat, kTaskCount> out;
  for (Task t : kAllTasks) {
    const LabelVocab& v = vocabs[task_index(t)];
    RowMat m(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(encoder.dim()));
    for (LabelId id = 0; id < v.size(); ++id) {
      m.row(static_cast<Eigen::Index>(id)) = encoder.encode_label(t, id, v.text(id)).transpose();
    }
    out[task_index(t)] = std::move(m);
  }
  return out;
}

RowMat encode_facts(const Encoder& encoder, const Corpus& corpus) {
  RowMat m(static_cast<Eigen::Index>(corpus.size()), static_cast<Eigen::Index>(encoder.dim()));
  for (size_t i = 0; i < corpus.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = encoder.encode_fact(corpus.cases[i]).transpose();
  }
  return m;
}

std::vector<std::span<double>> matrix_tensors(std::array<RowMat, kTaskCount>& m,
                                              std::span<const Task> tasks) {
  std::vector<std::span<double>> out;
  for (Task t : tasks) {
    RowMat& x = m[task_index(t)];
    out.emplace_back(x.data(), static_cast<size_t>(x.size()));
  }
  return out;
}

size_t total_size(const std::vector<std::span<double>>& tensors) {
  size_t n = 0;
  for (const auto& t : tensors) n += t.size();
  return n;
}

// Hashed features of every graph node, for encoder fine-tuning.
std::vector<SparseFeatures> node_features(const HashedEncoder& enc, const ReasoningGraph& g,
                                          const Corpus& train) {
  std::vector<SparseFeatures> out;
  out.reserve(g.size());
  for (const Node& n : g.nodes) {
    if (n.type == NodeType::Fact) {
      out.push_back(enc.featurize(join_clues(*train.cases[n.case_index].clues)));
    } else {
      out.push_back(enc.featurize(train.vocab(n.task).text(n.label)));
    }
  }
  return out;
}

void check_loss(double loss, const char* what, size_t epoch) {
  if (!std::isfinite(loss)) {
    throw DivergenceError(std::string(what) + ": non-finite loss at epoch " + std::to_string(epoch));
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (tasks.empty()) throw ConfigError("train: tasks must be non-empty");
  if (!(learning_rate > 0.0)) throw ConfigError("train: learning_rate must be positive");
  if (heads == 0) throw ConfigError("train: heads must be positive");
}

ScoreLoss score_loss_grad(const RowMat& facts, std::span<const JudgmentLabels> golds,
                          const std::array<RowMat, kTaskCount>& labels, std::span<const Task> tasks) {
  const auto n = facts.rows();
  if (static_cast<size_t>(n) != golds.size()) throw ArgumentError("total_loss: batch size mismatch");
  if (n == 0) throw ArgumentError("total_loss: empty batch");
  ScoreLoss out;
  out.d_facts = RowMat::Zero(n, facts.cols());
  const double scale = 1.0 / static_cast<double>(n);
  for (Task t : tasks) {
    const RowMat& L = labels[task_index(t)];
    if (L.cols() != facts.cols()) throw ArgumentError("total_loss: dimension mismatch");
    const RowMat scores = facts * L.transpose();
    RowMat d_scores(scores.rows(), scores.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vec proba = predict_proba(scores.row(i).transpose());
      const LabelId gold = golds[static_cast<size_t>(i)][t];
      out.loss += scale * ce_loss(proba, gold);
      d_scores.row(i) = scale * proba.transpose();
      d_scores(i, static_cast<Eigen::Index>(gold)) -= scale;
    }
    out.d_labels[task_index(t)] = d_scores.transpose() * facts;
    out.d_facts.noalias() += d_scores * L;
  }
  for (Task t : kAllTasks) {
    RowMat& d = out.d_labels[task_index(t)];
    if (d.size() == 0) d = RowMat::Zero(labels[task_index(t)].rows(), labels[task_index(t)].cols());
  }
  return out;
}

double total_loss(const RowMat& facts, std::span<const JudgmentLabels> golds,
                  const std::array<RowMat, kTaskCount>& labels, std::span<const Task> tasks) {
  return score_loss_grad(facts, golds, labels, tasks).loss;
}

double total_loss(const ReasoningGraph& graph, const GatParams& params, const Corpus& train,
                  std::span<const Task> tasks) {
  return graph_loss_grad(graph, params, train, tasks).loss;
}

GraphLoss graph_loss_grad(const ReasoningGraph& graph, const GatParams& params, const Corpus& train,
                          std::span<const Task> tasks) {
  if (train.size() != graph.fact_count) throw ArgumentError("graph loss: corpus does not match graph");
  const GatTrace trace = gat_forward_trace(graph, params);
  const RowMat& out = trace.output();
  std::array<RowMat, kTaskCount> labels;
  for (Task t : kAllTasks) labels[task_index(t)] = label_rows(graph, out, t);
  const RowMat facts = graph.features.topRows(static_cast<Eigen::Index>(graph.fact_count));
  const std::vector<JudgmentLabels> golds = gold_labels(train);
  ScoreLoss sl = score_loss_grad(facts, golds, labels, tasks);

  RowMat d_out = RowMat::Zero(out.rows(), out.cols());
  for (Task t : kAllTasks) {
    const size_t ti = task_index(t);
    d_out.middleRows(static_cast<Eigen::Index>(graph.label_begin[ti]),
                     static_cast<Eigen::Index>(graph.label_count[ti])) = sl.d_labels[ti];
  }
  GraphLoss gl;
  gl.loss = sl.loss;
  gl.grad = gat_backward(graph, params, trace, d_out, &gl.d_features);
  gl.d_features.topRows(static_cast<Eigen::Index>(graph.fact_count)) += sl.d_facts;
  return gl;
}

std::string loss_log_tsv(std::span<const LossRecord> records) {
  std::string out = "stage\tepoch\tloss\n";
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.loss);
    out += r.stage + "\t" + std::to_string(r.epoch) + "\t" + buf + "\n";
  }
  return out;
}

void prepare_case(const Model& model, CriminalCase& c) {
  if (model.train.use_clue_tracing) {
    if (!model.lexicon) throw ConfigError("clue tracing is enabled but no lexicon is available");
    trace_case(c, *model.lexicon, model.clue_threshold);
  } else {
    c.clues = full_text_clues(c);
  }
}

Vec score(const Model& model, const CriminalCase& c, Task task) {
  return score_case(model.encoder.encode_fact(c), model.labels[task_index(task)]);
}

std::vector<MetricsReport> evaluate(const Model& model, const Corpus& cases) {
  if (cases.empty()) throw DataError("evaluate: no cases");
  std::vector<MetricsReport> out;
  std::vector<std::vector<LabelId>> golds(kTaskCount), preds(kTaskCount);
  for (const auto& original : cases.cases) {
    CriminalCase c = original;
    prepare_case(model, c);
    const Vec fact = model.encoder.encode_fact(c);
    for (Task t : model.train.tasks) {
      const size_t ti = task_index(t);
      const auto gold = model.vocabs[ti].find(cases.label_text(c, t));
      if (!gold) {
        throw DataError("evaluate: case " + c.id + " has " + std::string(task_name(t)) +
                        " label unknown to the model");
      }
      golds[ti].push_back(*gold);
      preds[ti].push_back(predict_label(score_case(fact, model.labels[ti])));
    }
  }
  for (Task t : model.train.tasks) {
    const size_t ti = task_index(t);
    out.push_back(report(golds[ti], preds[ti], model.vocabs[ti].size(), t));
  }
  return out;
}

double overall_accuracy(std::span<const MetricsReport> reports) {
  double correct = 0.0;
  double total = 0.0;
  for (const auto& r : reports) {
    correct += r.acc * static_cast<double>(r.total);
    total += static_cast<double>(r.total);
  }
  return total > 0.0 ? correct / total : 0.0;
}

CorpusSplit select_and_split(const Corpus& corpus, const PipelineConfig& config) {
  if (!config.scenario) return split(corpus, SplitSpec{config.train_fraction, config.seed});
  const Corpus selected =
      filter_scenario(corpus, *config.scenario, derive_seed(config.seed, kScenarioStream));
  return split(selected, SplitSpec{config.train_fraction, config.seed});
}

PipelineResult run_pipeline(const Corpus& corpus, const Lexicon* lexicon, const PipelineConfig& config,
                            const LogFn& log, bool pretrain_only) {
  const TrainConfig& tc = config.train;
  auto say = [&](const std::string& line) {
    if (log) log(line);
  };

  CorpusSplit data = in_stage("split", [&] {
    tc.validate();
    return select_and_split(corpus, config);
  });
  say("split: train=" + std::to_string(data.train.size()) +
      " validation=" + std::to_string(data.validation.size()) +
      " test=" + std::to_string(data.test.size()));

  in_stage("clue_tracing", [&] {
    if (tc.use_clue_tracing && lexicon == nullptr) {
      throw ConfigError("clue tracing is enabled but no lexicon was given");
    }
    for (Corpus* part : {&data.train, &data.validation, &data.test}) {
      for (auto& c : part->cases) {
        if (tc.use_clue_tracing) {
          trace_case(c, *lexicon, config.clue_threshold);
        } else {
          c.clues = full_text_clues(c);
        }
      }
    }
  });

  std::vector<LossRecord> losses;
  Encoder encoder = in_stage("contrastive", [&] {
    Encoder enc = config.precomputed
                      ? Encoder(EmbeddingTable::load(config.embeddings))
                      : Encoder(HashedEncoder::initialize(config.encoder,
                                                          derive_seed(config.seed, kEncoderInitStream)));
    if (!tc.use_contrastive) return enc;
    HashedEncoder* hashed = enc.trainable();
    if (!hashed) {
      say("contrastive: precomputed backend has no trainable parameters, stage skipped");
      return enc;
    }
    ContrastiveConfig cc = config.contrastive;
    cc.seed = derive_seed(config.seed, kContrastiveStream);
    const ContrastiveReport rep = train_contrastive(*hashed, data.train, cc, [&](size_t epoch, double loss) {
      losses.push_back({"contrastive", epoch, loss});
    });
    if (!rep.epoch_loss.empty()) {
      say("contrastive: epochs=" + std::to_string(rep.epoch_loss.size()) +
          " first_loss=" + std::to_string(rep.epoch_loss.front()) +
          " final_loss=" + std::to_string(rep.epoch_loss.back()));
    }
    return enc;
  });

  Model model{data.train.vocabs, tc, lexicon ? std::optional<Lexicon>(*lexicon) : std::nullopt,
              config.clue_threshold, config.precomputed ? config.embeddings.string() : std::string(),
              std::move(encoder), std::nullopt, {}, std::nullopt};
  if (!tc.use_clue_tracing) model.lexicon.reset();

  if (pretrain_only) {
    model.labels = encode_label_matrices(model.encoder, model.vocabs);
    return PipelineResult{std::move(model), std::move(data), std::move(losses), {}};
  }

  in_stage("graph_training", [&] {
    const std::span<const Task> tasks(tc.tasks);
    const std::vector<JudgmentLabels> golds = gold_labels(data.train);
    HashedEncoder* tune = tc.freeze_encoder_after_contrastive ? nullptr : model.encoder.trainable();
    std::optional<AdamState> encoder_adam;
    if (tune) {
      encoder_adam.emplace(static_cast<size_t>(tune->projection().size() + tune->bias().size()),
                           AdamConfig{tc.learning_rate});
    }
    auto encoder_step = [&](const std::vector<SparseFeatures>& xs, const RowMat& ys, const RowMat& dys) {
      Mat d_proj = Mat::Zero(tune->projection().rows(), tune->projection().cols());
      Vec d_bias = Vec::Zero(tune->bias().size());
      for (size_t i = 0; i < xs.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        tune->accumulate_gradient(xs[i], ys.row(r).transpose(), dys.row(r).transpose(), d_proj, d_bias);
      }
      const std::span<double> p[] = {{tune->projection().data(), static_cast<size_t>(d_proj.size())},
                                     {tune->bias().data(), static_cast<size_t>(d_bias.size())}};
      const std::span<const double> g[] = {{d_proj.data(), static_cast<size_t>(d_proj.size())},
                                           {d_bias.data(), static_cast<size_t>(d_bias.size())}};
      adam_step(p, g, *encoder_adam);
    };

    if (tc.use_graph) {
      ReasoningGraph graph = build_graph(data.train);
      init_features(graph, model.encoder, data.train);
      GatParams params = GatParams::initialize(model.encoder.dim(), tc.heads,
                                               derive_seed(config.seed, kGraphInitStream), tc.leaky_slope);
      AdamState adam(params.parameter_count(), AdamConfig{tc.learning_rate});
      std::vector<SparseFeatures> xs;
      if (tune) xs = node_features(*tune, graph, data.train);
      say("graph: nodes=" + std::to_string(graph.size()) + " edges=" + std::to_string(graph.edge_count()) +
          " parameters=" + std::to_string(params.parameter_count()));
      for (size_t epoch = 0; epoch < tc.epochs; ++epoch) {
        GraphLoss gl = graph_loss_grad(graph, params, data.train, tasks);
        check_loss(gl.loss, "graph", epoch);
        losses.push_back({"graph", epoch, gl.loss});
        auto p = params.tensors();
        adam_step(p, std::as_const(gl.grad).tensors(), adam);
        if (tune) {
          encoder_step(xs, graph.features, gl.d_features);
          init_features(graph, model.encoder, data.train);
        }
      }
      const RowMat out = gat_forward(graph, params);
      for (Task t : kAllTasks) model.labels[task_index(t)] = label_rows(graph, out, t);
      model.gat = std::move(params);
      model.optimizer = std::move(adam);
    } else {
      std::array<RowMat, kTaskCount> labels = encode_label_matrices(model.encoder, model.vocabs);
      RowMat facts = encode_facts(model.encoder, data.train);
      auto tensors = matrix_tensors(labels, tasks);
      AdamState adam(total_size(tensors), AdamConfig{tc.learning_rate});
      std::vector<SparseFeatures> xs;
      if (tune) {
        for (const auto& c : data.train.cases) xs.push_back(tune->featurize(join_clues(*c.clues)));
      }
      for (size_t epoch = 0; epoch < tc.epochs; ++epoch) {
        ScoreLoss sl = score_loss_grad(facts, golds, labels, tasks);
        check_loss(sl.loss, "label_finetune", epoch);
        losses.push_back({"label_finetune", epoch, sl.loss});
        std::vector<std::span<const double>> grads;
        for (Task t : tasks) {
          const RowMat& d = sl.d_labels[task_index(t)];
          grads.emplace_back(d.data(), static_cast<size_t>(d.size()));
        }
        adam_step(tensors, grads, adam);
        if (tune) {
          encoder_step(xs, facts, sl.d_facts);
          facts = encode_facts(model.encoder, data.train);
        }
      }
      model.labels = std::move(labels);
      model.optimizer = std::move(adam);
    }
  });

  std::vector<MetricsReport> validation;
  if (!data.validation.empty()) {
    validation = in_stage("evaluation", [&] { return evaluate(model, data.validation); });
  }
  return PipelineResult{std::move(model), std::move(data), std::move(losses), std::move(validation)};
}

}  // namespace semdr
