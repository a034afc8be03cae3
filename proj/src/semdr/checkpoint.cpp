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

#include "semdr/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "semdr/errors.hpp"

namespace semdr {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kFormat = "semdr-checkpoint";
constexpr int kVersion = 1;

template <typename Matrix>
ordered_json matrix_json(const Matrix& m) {
  auto rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json vector_json(const Vec& v) {
  auto arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

template <typename Matrix>
Matrix matrix_from(const json& j, Eigen::Index cols_hint = -1) {
  if (!j.is_array()) throw DataError("checkpoint: expected a matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : std::max<Eigen::Index>(cols_hint, 0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw DataError("checkpoint: ragged matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<size_t>(c)].get<double>();
  }
  return m;
}

Vec vector_from(const json& j) {
  if (!j.is_array()) throw DataError("checkpoint: expected a vector");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

std::vector<double> doubles_from(const json& j) {
  if (!j.is_array()) throw DataError("checkpoint: expected a number array");
  return j.get<std::vector<double>>();
}

}  // namespace

ordered_json checkpoint_json(const Model& model) {
  ordered_json doc;

  ordered_json meta;
  meta["format"] = kFormat;
  meta["version"] = kVersion;
  auto tasks = ordered_json::array();
  for (Task t : model.train.tasks) tasks.push_back(task_name(t));
  meta["tasks"] = std::move(tasks);
  meta["toggles"] = {{"use_clue_tracing", model.train.use_clue_tracing},
                     {"use_contrastive", model.train.use_contrastive},
                     {"use_graph", model.train.use_graph},
                     {"freeze_encoder_after_contrastive", model.train.freeze_encoder_after_contrastive}};
  meta["clue_threshold"] = model.clue_threshold;
  meta["lexicon"] = model.lexicon ? model.lexicon->to_json() : ordered_json(nullptr);
  ordered_json vocabs;
  for (Task t : kAllTasks) vocabs[std::string(task_name(t))] = model.vocabs[task_index(t)].entries();
  meta["vocabs"] = std::move(vocabs);
  meta["embeddings"] = model.embeddings_path.empty() ? ordered_json(nullptr) : ordered_json(model.embeddings_path);
  doc["meta"] = std::move(meta);

  ordered_json encoder;
  if (const HashedEncoder* h = model.encoder.trainable()) {
    encoder["backend"] = "hashed";
    encoder["buckets"] = h->config().buckets;
    encoder["ngram_min"] = h->config().ngram_min;
    encoder["ngram_max"] = h->config().ngram_max;
    encoder["dim"] = h->config().dim;
    encoder["projection"] = matrix_json(h->projection());
    encoder["bias"] = vector_json(h->bias());
  } else {
    encoder["backend"] = "precomputed";
    encoder["dim"] = model.encoder.dim();
  }
  doc["encoder"] = std::move(encoder);

  ordered_json graph;
  if (model.gat) {
    graph["leaky_slope"] = model.gat->leaky_slope;
    auto layers = ordered_json::array();
    for (const auto& layer : model.gat->layers) {
      ordered_json l;
      l["combine"] = layer.combine == HeadCombine::Concat ? "concat" : "average";
      auto heads = ordered_json::array();
      for (const auto& h : layer.heads) {
        heads.push_back({{"weight", matrix_json(h.weight)}, {"attention", vector_json(h.attention)}});
      }
      l["heads"] = std::move(heads);
      layers.push_back(std::move(l));
    }
    graph["layers"] = std::move(layers);
  } else {
    graph["layers"] = nullptr;
  }
  ordered_json labels;
  for (Task t : kAllTasks) labels[std::string(task_name(t))] = matrix_json(model.labels[task_index(t)]);
  graph["labels"] = std::move(labels);
  doc["graph"] = std::move(graph);

  if (model.optimizer) {
    const AdamState& s = *model.optimizer;
    doc["optimizer"] = {{"learning_rate", s.config.learning_rate},
                        {"beta1", s.config.beta1},
                        {"beta2", s.config.beta2},
                        {"epsilon", s.config.epsilon},
                        {"t", s.t},
                        {"m", s.m},
                        {"v", s.v}};
  } else {
    doc["optimizer"] = nullptr;
  }
  return doc;
}

Model model_from_json(const json& doc) {
  try {
    const json& meta = doc.at("meta");
    if (meta.at("format") != kFormat) throw DataError("checkpoint: unknown format");
    if (meta.at("version").get<int>() != kVersion) throw DataError("checkpoint: unsupported version");

    TrainConfig train;
    train.tasks.clear();
    for (const auto& t : meta.at("tasks")) {
      auto task = parse_task(t.get<std::string>());
      if (!task) throw DataError("checkpoint: unknown task");
      train.tasks.push_back(*task);
    }
    const json& toggles = meta.at("toggles");
    train.use_clue_tracing = toggles.at("use_clue_tracing").get<bool>();
    train.use_contrastive = toggles.at("use_contrastive").get<bool>();
    train.use_graph = toggles.at("use_graph").get<bool>();
    train.freeze_encoder_after_contrastive = toggles.at("freeze_encoder_after_contrastive").get<bool>();

    std::array<LabelVocab, kTaskCount> vocabs{LabelVocab(Task::Imprisonment), LabelVocab(Task::Charge),
                                              LabelVocab(Task::Article)};
    for (Task t : kAllTasks) {
      for (const auto& s : meta.at("vocabs").at(std::string(task_name(t)))) {
        vocabs[task_index(t)].intern(s.get<std::string>());
      }
    }

    std::optional<Lexicon> lexicon;
    if (!meta.at("lexicon").is_null()) lexicon = Lexicon::from_json(meta.at("lexicon"));
    std::string embeddings;
    if (!meta.at("embeddings").is_null()) embeddings = meta.at("embeddings").get<std::string>();

    const json& enc = doc.at("encoder");
    const std::string backend = enc.at("backend").get<std::string>();
    std::optional<Encoder> encoder;
    if (backend == "hashed") {
      HashedEncoderConfig cfg;
      cfg.buckets = enc.at("buckets").get<size_t>();
      cfg.ngram_min = enc.at("ngram_min").get<int>();
      cfg.ngram_max = enc.at("ngram_max").get<int>();
      cfg.dim = enc.at("dim").get<size_t>();
      encoder.emplace(HashedEncoder(cfg, matrix_from<Mat>(enc.at("projection")), vector_from(enc.at("bias"))));
    } else if (backend == "precomputed") {
      if (embeddings.empty()) throw DataError("checkpoint: precomputed backend without embeddings path");
      encoder.emplace(EmbeddingTable::load(embeddings));
      if (encoder->dim() != enc.at("dim").get<size_t>()) {
        throw DataError("checkpoint: embedding file dimension differs from checkpoint");
      }
    } else {
      throw DataError("checkpoint: unknown encoder backend " + backend);
    }

    Model model{vocabs, train, std::move(lexicon), meta.at("clue_threshold").get<double>(), embeddings,
                std::move(*encoder), std::nullopt, {}, std::nullopt};

    const json& graph = doc.at("graph");
    if (!graph.at("layers").is_null()) {
      GatParams p;
      p.leaky_slope = graph.at("leaky_slope").get<double>();
      for (const auto& l : graph.at("layers")) {
        GatLayer layer;
        layer.combine = l.at("combine") == "concat" ? HeadCombine::Concat : HeadCombine::Average;
        for (const auto& h : l.at("heads")) {
          layer.heads.push_back(GatHead{matrix_from<Mat>(h.at("weight")), vector_from(h.at("attention"))});
        }
        p.layers.push_back(std::move(layer));
      }
      p.validate(model.encoder.dim());
      model.gat = std::move(p);
      model.train.heads = model.gat->layers.front().heads.size();
      model.train.leaky_slope = model.gat->leaky_slope;
    }
    for (Task t : kAllTasks) {
      RowMat m = matrix_from<RowMat>(graph.at("labels").at(std::string(task_name(t))),
                                     static_cast<Eigen::Index>(model.encoder.dim()));
      if (static_cast<size_t>(m.rows()) != vocabs[task_index(t)].size() ||
          static_cast<size_t>(m.cols()) != model.encoder.dim()) {
        throw DataError("checkpoint: label matrix shape mismatch for " + std::string(task_name(t)));
      }
      model.labels[task_index(t)] = std::move(m);
    }

    const json& opt = doc.at("optimizer");
    if (!opt.is_null()) {
      AdamState s;
      s.config = AdamConfig{opt.at("learning_rate").get<double>(), opt.at("beta1").get<double>(),
                            opt.at("beta2").get<double>(), opt.at("epsilon").get<double>()};
      s.t = opt.at("t").get<uint64_t>();
      s.m = doubles_from(opt.at("m"));
      s.v = doubles_from(opt.at("v"));
      model.optimizer = std::move(s);
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  } catch (const ArgumentError& e) {
    throw DataError(std::string("checkpoint: ") + e.what());
  }
}

std::string serialize_checkpoint(const Model& model) { return checkpoint_json(model).dump() + "\n"; }

void save_checkpoint(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out << serialize_checkpoint(model);
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

Model load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError("checkpoint " + path.string() + ": " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace semdr
