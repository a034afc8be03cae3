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

#include "semdr/commands.hpp"

#include <fstream>

#include "semdr/checkpoint.hpp"
#include "semdr/clue_tracer.hpp"
#include "semdr/errors.hpp"
#include "semdr/predictor.hpp"

namespace semdr {
namespace {

namespace fs = std::filesystem;

fs::path require_path(const RunConfig& config, const char* name) {
  auto p = config.path(name);
  if (!p) throw ConfigError(std::string("config: paths.") + name + " is required");
  return *p;
}

Lexicon require_lexicon(const RunConfig& config) {
  const fs::path p = require_path(config, "lexicon");
  if (!fs::exists(p)) throw ConfigError("lexicon file not found: " + p.string());
  return Lexicon::load(p);
}

fs::path ensure_output_dir(const RunConfig& config) {
  const fs::path dir = config.output_dir();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

PipelineResult run(const RunConfig& config, const LogFn& log, bool pretrain_only) {
  const Corpus corpus = load_corpus(require_path(config, "corpus"));
  const PipelineConfig pc = config.pipeline(corpus);
  std::optional<Lexicon> lexicon;
  if (pc.train.use_clue_tracing) lexicon = require_lexicon(config);
  return run_pipeline(corpus, lexicon ? &*lexicon : nullptr, pc, log, pretrain_only);
}

}  // namespace

fs::path cmd_trace(const RunConfig& config, const std::optional<fs::path>& in,
                   const std::optional<fs::path>& out, const LogFn& log) {
  const Lexicon lexicon = require_lexicon(config);
  const fs::path input = in ? *in : require_path(config, "corpus");
  Corpus corpus = load_corpus(input);
  const fs::path output = out ? *out : ensure_output_dir(config) / "clues.jsonl";
  std::string text;
  size_t fallback = 0;
  for (auto& c : corpus.cases) {
    trace_case(c, lexicon, config.clue_threshold());
    const ClueSet& k = *c.clues;
    for (Provenance p : {k.motivation_source, k.action_source, k.harm_source}) {
      if (p == Provenance::FallbackArea) ++fallback;
    }
    text += clue_record(c).dump() + "\n";
  }
  write_file(output, text);
  if (log) {
    log("trace: cases=" + std::to_string(corpus.size()) + " fallback_fields=" + std::to_string(fallback) +
        " -> " + output.string());
  }
  return output;
}

PipelineResult cmd_pretrain(const RunConfig& config, const LogFn& log) {
  const fs::path dir = ensure_output_dir(config);
  PipelineResult result = run(config, log, true);
  save_checkpoint(result.model, dir / "pretrain_checkpoint.json");
  write_file(dir / "pretrain_loss.tsv", loss_log_tsv(result.losses));
  return result;
}

PipelineResult cmd_train(const RunConfig& config, const LogFn& log) {
  const fs::path dir = ensure_output_dir(config);
  PipelineResult result = run(config, log, false);
  const fs::path ckpt = config.path("checkpoint").value_or(dir / "checkpoint.json");
  save_checkpoint(result.model, ckpt);
  write_file(dir / "loss.tsv", loss_log_tsv(result.losses));
  write_file(dir / "metrics.json", to_json(result.validation).dump(2) + "\n");
  write_file(dir / "metrics.tsv", metrics_tsv(result.validation));
  if (log) {
    for (const auto& r : result.validation) {
      log("validation " + std::string(task_name(r.task)) + ": acc=" + std::to_string(r.acc) +
          " f1=" + std::to_string(r.f1));
    }
    log("checkpoint -> " + ckpt.string());
  }
  return result;
}

std::vector<MetricsReport> cmd_evaluate(const RunConfig& config, const fs::path& checkpoint,
                                        const std::string& split_name, const LogFn& log) {
  if (split_name != "train" && split_name != "validation" && split_name != "test") {
    throw ConfigError("unknown split \"" + split_name + "\" (expected train, validation or test)");
  }
  if (!fs::exists(checkpoint)) throw ConfigError("checkpoint not found: " + checkpoint.string());
  const Model model = load_checkpoint(checkpoint);
  const Corpus corpus = load_corpus(require_path(config, "corpus"));
  const CorpusSplit data = select_and_split(corpus, config.pipeline(corpus));
  const Corpus& part = split_name == "train" ? data.train : split_name == "validation" ? data.validation : data.test;
  const std::vector<MetricsReport> reports = evaluate(model, part);
  const fs::path dir = ensure_output_dir(config);
  write_file(dir / ("metrics_" + split_name + ".json"), to_json(reports).dump(2) + "\n");
  write_file(dir / ("metrics_" + split_name + ".tsv"), metrics_tsv(reports));
  if (log) log("evaluate: " + split_name + " cases=" + std::to_string(part.size()));
  return reports;
}

void cmd_predict(const fs::path& checkpoint, const fs::path& in, const fs::path& out, const LogFn& log) {
  if (!fs::exists(checkpoint)) throw ConfigError("checkpoint not found: " + checkpoint.string());
  const Model model = load_checkpoint(checkpoint);
  Corpus corpus = load_corpus(in);
  std::string text;
  for (auto& c : corpus.cases) {
    prepare_case(model, c);
    const Vec fact = model.encoder.encode_fact(c);
    for (Task t : model.train.tasks) {
      const size_t ti = task_index(t);
      const Vec logits = score_case(fact, model.labels[ti]);
      const Vec proba = predict_proba(logits);
      nlohmann::ordered_json rec;
      rec["id"] = c.id;
      rec["task"] = task_name(t);
      rec["pred"] = model.vocabs[ti].text(predict_label(logits));
      rec["proba"] = std::vector<double>(proba.data(), proba.data() + proba.size());
      text += rec.dump() + "\n";
    }
  }
  write_file(out, text);
  if (log) log("predict: cases=" + std::to_string(corpus.size()) + " -> " + out.string());
}

std::string combination_name(const Toggles& t) {
  if (t.clue && t.contrastive && t.graph) return "full";
  std::string name;
  if (!t.clue) name += "-clue";
  if (!t.contrastive) name += "-contrastive";
  if (!t.graph) name += "-graph";
  return name;
}

std::vector<Toggles> parse_grid(const std::string& grid) {
  std::vector<Toggles> all;
  for (int bits = 7; bits >= 0; --bits) {
    all.push_back(Toggles{(bits & 4) != 0, (bits & 2) != 0, (bits & 1) != 0});
  }
  if (grid.empty() || grid == "full" || grid == "all") return all;
  std::vector<Toggles> out;
  size_t start = 0;
  while (start <= grid.size()) {
    const size_t comma = grid.find(',', start);
    const std::string item = grid.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    bool found = false;
    for (const auto& t : all) {
      if (combination_name(t) == item) {
        out.push_back(t);
        found = true;
      }
    }
    if (!found) throw ConfigError("unknown ablation combination \"" + item + "\"");
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() < 2) throw ConfigError("ablation grid needs at least two combinations");
  return out;
}

std::vector<AblationEntry> run_ablation(const RunConfig& config, const std::vector<Toggles>& grid,
                                        const LogFn& log) {
  const Corpus corpus = load_corpus(require_path(config, "corpus"));
  std::optional<Lexicon> lexicon;
  std::vector<AblationEntry> entries;
  for (const Toggles& t : grid) {
    PipelineConfig pc = config.pipeline(corpus);
    pc.train.use_clue_tracing = t.clue;
    pc.train.use_contrastive = t.contrastive;
    pc.train.use_graph = t.graph;
    if (t.clue && !lexicon) lexicon = require_lexicon(config);
    const std::string name = combination_name(t);
    if (log) log("ablate: " + name);
    PipelineResult result = run_pipeline(corpus, t.clue ? &*lexicon : nullptr, pc, log);
    entries.push_back({name, evaluate(result.model, result.data.test)});
  }
  return entries;
}

std::string cmd_ablate(const RunConfig& config, const std::string& grid, const LogFn& log) {
  const std::vector<AblationEntry> entries = run_ablation(config, parse_grid(grid), log);
  const std::string table = ablation_table(entries);
  write_file(ensure_output_dir(config) / "ablation.tsv", table);
  return table;
}

}  // namespace semdr
