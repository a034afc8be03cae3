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

#include "semdr/config.hpp"

#include <cstdlib>
#include <fstream>

#include "semdr/errors.hpp"

namespace semdr {
namespace {

using nlohmann::json;

void reject_unknown(const json& doc, const json& schema, const std::string& where) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!schema.contains(it.key())) throw ConfigError("config: unknown key \"" + key + "\"");
    const json& expected = schema[it.key()];
    if (expected.is_object() && !it->is_object()) {
      throw ConfigError("config: \"" + key + "\" must be an object");
    }
    if (expected.is_object()) reject_unknown(*it, expected, key);
  }
}

template <typename T>
T get(const json& doc, const char* section, const char* key) {
  try {
    return doc.at(section).at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: \"") + section + "." + key + "\" has the wrong type");
  }
}

}  // namespace

json RunConfig::defaults() {
  return json{
      {"version", kConfigVersion},
      {"seed", 0},
      {"paths",
       {{"corpus", nullptr},
        {"lexicon", nullptr},
        {"embeddings", nullptr},
        {"checkpoint", nullptr},
        {"output_dir", "semdr-out"}}},
      {"scenario", nullptr},
      {"split", {{"train_fraction", 0.8}}},
      {"clue", {{"threshold", kDefaultFuzzyThreshold}}},
      {"encoder", {{"backend", "hashed"}, {"buckets", 4096}, {"ngram_min", 1}, {"ngram_max", 3}, {"dim", 256}}},
      {"contrastive",
       {{"temperature", 0.05}, {"negatives", 7}, {"epochs", 10}, {"learning_rate", 0.01}, {"dropout", 0.1}}},
      {"train",
       {{"epochs", 5000},
        {"learning_rate", 0.01},
        {"tasks", {"imprisonment", "charge", "article"}},
        {"use_clue_tracing", true},
        {"use_contrastive", true},
        {"use_graph", true},
        {"freeze_encoder_after_contrastive", true}}},
      {"graph", {{"heads", 4}, {"leaky_slope", 0.2}}},
  };
}

RunConfig::RunConfig() : doc_(defaults()) {}

RunConfig RunConfig::from_json(const json& user) {
  if (!user.is_object()) throw ConfigError("config: document must be a JSON object");
  if (!user.contains("version")) throw ConfigError("config: missing \"version\"");
  if (!user["version"].is_number_integer() || user["version"].get<int>() != kConfigVersion) {
    throw ConfigError("config: unsupported version (expected " + std::to_string(kConfigVersion) + ")");
  }
  const json schema = defaults();
  json scenario_free = user;
  scenario_free.erase("scenario");
  reject_unknown(scenario_free, schema, "");

  RunConfig cfg;
  for (auto it = user.begin(); it != user.end(); ++it) {
    if (it->is_object() && cfg.doc_[it.key()].is_object()) {
      for (auto inner = it->begin(); inner != it->end(); ++inner) cfg.doc_[it.key()][inner.key()] = *inner;
    } else {
      cfg.doc_[it.key()] = *it;
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

void RunConfig::set(const std::string& dotted_key, const std::string& value) {
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  json::json_pointer ptr;
  size_t start = 0;
  while (true) {
    const size_t dot = dotted_key.find('.', start);
    ptr /= dotted_key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  json next = doc_;
  const bool scenario = dotted_key.rfind("scenario", 0) == 0;
  if (!scenario && !next.contains(ptr)) throw ConfigError("config: unknown key \"" + dotted_key + "\"");
  if (scenario && next["scenario"].is_null() && dotted_key != "scenario") next["scenario"] = json::object();
  next[ptr] = parsed;
  std::swap(doc_, next);
  try {
    validate();
  } catch (...) {
    std::swap(doc_, next);
    throw;
  }
}

void RunConfig::apply_environment() {
  if (const char* env = std::getenv("SEMDR_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw ConfigError("SEMDR_SEED must be an unsigned integer");
    doc_["seed"] = static_cast<uint64_t>(v);
  }
}

uint64_t RunConfig::seed() const {
  const json& s = doc_.at("seed");
  if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<int64_t>() >= 0)) {
    throw ConfigError("config: \"seed\" must be a non-negative integer");
  }
  return s.get<uint64_t>();
}

std::optional<std::filesystem::path> RunConfig::path(const char* name) const {
  const json& p = doc_.at("paths").at(name);
  if (p.is_null()) return std::nullopt;
  if (!p.is_string()) throw ConfigError(std::string("config: paths.") + name + " must be a string");
  return std::filesystem::path(p.get<std::string>());
}

std::filesystem::path RunConfig::output_dir() const {
  auto p = path("output_dir");
  return p ? *p : std::filesystem::path("semdr-out");
}

double RunConfig::clue_threshold() const { return get<double>(doc_, "clue", "threshold"); }

void RunConfig::validate() const {
  seed();
  for (const char* name : {"corpus", "lexicon", "embeddings", "checkpoint", "output_dir"}) path(name);
  const double tf = get<double>(doc_, "split", "train_fraction");
  if (!(tf > 0.0 && tf < 1.0)) throw ConfigError("config: split.train_fraction must lie in (0, 1)");
  const double th = clue_threshold();
  if (!(th > 0.0 && th <= 1.0)) throw ConfigError("config: clue.threshold must lie in (0, 1]");
  const std::string backend = get<std::string>(doc_, "encoder", "backend");
  if (backend != "hashed" && backend != "precomputed") {
    throw ConfigError("config: encoder.backend must be \"hashed\" or \"precomputed\"");
  }
  HashedEncoderConfig enc{get<size_t>(doc_, "encoder", "buckets"), get<int>(doc_, "encoder", "ngram_min"),
                          get<int>(doc_, "encoder", "ngram_max"), get<size_t>(doc_, "encoder", "dim")};
  enc.validate();
  if (!(get<double>(doc_, "contrastive", "temperature") > 0.0)) {
    throw ConfigError("config: contrastive.temperature must be positive");
  }
  if (get<size_t>(doc_, "contrastive", "negatives") < 1) {
    throw ConfigError("config: contrastive.negatives must be >= 1");
  }
  const double p = get<double>(doc_, "contrastive", "dropout");
  if (!(p >= 0.0 && p < 1.0)) throw ConfigError("config: contrastive.dropout must lie in [0, 1)");
  get<size_t>(doc_, "contrastive", "epochs");
  get<double>(doc_, "contrastive", "learning_rate");
  const json& tasks = doc_.at("train").at("tasks");
  if (!tasks.is_array() || tasks.empty()) throw ConfigError("config: train.tasks must be a non-empty array");
  for (const auto& t : tasks) {
    if (!t.is_string() || !parse_task(t.get<std::string>())) {
      throw ConfigError("config: unknown task in train.tasks");
    }
  }
  get<size_t>(doc_, "train", "epochs");
  for (const char* key : {"use_clue_tracing", "use_contrastive", "use_graph", "freeze_encoder_after_contrastive"}) {
    get<bool>(doc_, "train", key);
  }
  if (!(get<double>(doc_, "train", "learning_rate") > 0.0)) {
    throw ConfigError("config: train.learning_rate must be positive");
  }
  const size_t heads = get<size_t>(doc_, "graph", "heads");
  if (heads == 0 || enc.dim % heads != 0) {
    throw ConfigError("config: encoder.dim must be divisible by graph.heads");
  }
  get<double>(doc_, "graph", "leaky_slope");
  const json& sc = doc_.at("scenario");
  if (!sc.is_null() && !sc.is_object()) throw ConfigError("config: scenario must be an object or null");
}

ScenarioSpec parse_scenario(const json& doc, const Corpus& corpus) {
  if (!doc.is_object()) throw ConfigError("scenario must be an object");
  static const json known = {{"kind", 0}, {"min_charge_count", 0}, {"max_charge_count", 0},
                             {"min_article_count", 0}, {"charge_allowlist", 0}, {"case_cap", 0}};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!known.contains(it.key())) throw ConfigError("config: unknown key \"scenario." + it.key() + "\"");
  }
  const std::string kind = doc.value("kind", std::string("high_frequency"));
  ScenarioSpec s;
  if (kind == "high_frequency") {
    s = ScenarioSpec::high_frequency();
  } else if (kind == "low_frequency") {
    s = ScenarioSpec::low_frequency();
  } else if (kind == "confusing") {
    s = ScenarioSpec::confusing({}, std::nullopt);
    s.charge_allowlist.reset();
  } else {
    throw ConfigError("config: unknown scenario kind \"" + kind + "\"");
  }
  try {
    if (doc.contains("min_charge_count")) s.min_charge_count = doc["min_charge_count"].get<uint64_t>();
    if (doc.contains("max_charge_count")) {
      if (doc["max_charge_count"].is_null()) {
        s.max_charge_count.reset();
      } else {
        s.max_charge_count = doc["max_charge_count"].get<uint64_t>();
      }
    }
    if (doc.contains("min_article_count")) s.min_article_count = doc["min_article_count"].get<uint64_t>();
    if (doc.contains("case_cap") && !doc["case_cap"].is_null()) s.case_cap = doc["case_cap"].get<size_t>();
    if (doc.contains("charge_allowlist") && !doc["charge_allowlist"].is_null()) {
      std::set<LabelId> ids;
      for (const auto& name : doc["charge_allowlist"]) {
        auto id = corpus.vocab(Task::Charge).find(name.get<std::string>());
        if (!id) throw ConfigError("config: charge \"" + name.get<std::string>() + "\" not in corpus");
        ids.insert(*id);
      }
      s.charge_allowlist = std::move(ids);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: scenario: ") + e.what());
  }
  s.validate();
  return s;
}

PipelineConfig RunConfig::pipeline(const Corpus& corpus) const {
  PipelineConfig p;
  p.seed = seed();
  if (!doc_.at("scenario").is_null()) p.scenario = parse_scenario(doc_.at("scenario"), corpus);
  p.train_fraction = get<double>(doc_, "split", "train_fraction");
  p.clue_threshold = clue_threshold();
  p.precomputed = get<std::string>(doc_, "encoder", "backend") == "precomputed";
  if (p.precomputed) {
    auto emb = path("embeddings");
    if (!emb) throw ConfigError("config: precomputed backend needs paths.embeddings");
    p.embeddings = *emb;
  }
  p.encoder = {get<size_t>(doc_, "encoder", "buckets"), get<int>(doc_, "encoder", "ngram_min"),
               get<int>(doc_, "encoder", "ngram_max"), get<size_t>(doc_, "encoder", "dim")};
  p.contrastive.temperature = get<double>(doc_, "contrastive", "temperature");
  p.contrastive.negatives = get<size_t>(doc_, "contrastive", "negatives");
  p.contrastive.epochs = get<size_t>(doc_, "contrastive", "epochs");
  p.contrastive.learning_rate = get<double>(doc_, "contrastive", "learning_rate");
  p.contrastive.dropout = get<double>(doc_, "contrastive", "dropout");
  p.train.epochs = get<size_t>(doc_, "train", "epochs");
  p.train.learning_rate = get<double>(doc_, "train", "learning_rate");
  p.train.tasks.clear();
  for (const auto& t : doc_.at("train").at("tasks")) p.train.tasks.push_back(*parse_task(t.get<std::string>()));
  p.train.use_clue_tracing = get<bool>(doc_, "train", "use_clue_tracing");
  p.train.use_contrastive = get<bool>(doc_, "train", "use_contrastive");
  p.train.use_graph = get<bool>(doc_, "train", "use_graph");
  p.train.freeze_encoder_after_contrastive = get<bool>(doc_, "train", "freeze_encoder_after_contrastive");
  p.train.heads = get<size_t>(doc_, "graph", "heads");
  p.train.leaky_slope = get<double>(doc_, "graph", "leaky_slope");
  return p;
}

}  // namespace semdr
