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

// Command-line front end. Links only the C interface.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semdr/semdr.h"

namespace {

struct Options {
  std::string config;
  std::string in;
  std::string out;
  std::string checkpoint;
  std::string split = "test";
  std::string grid = "full";
  std::vector<std::string> sets;
  std::optional<long long> seed;
  std::optional<long long> epochs;
  std::string out_dir;
  bool quiet = false;
};

void print_line(const char* line, void*) {
  std::fprintf(stderr, "%s\n", line);
  std::fflush(stderr);
}

int report(semdr_status status) {
  if (status != SEMDR_OK) std::fprintf(stderr, "semdr: error: %s\n", semdr_last_error());
  return static_cast<int>(status);
}

class ConfigHandle {
 public:
  ~ConfigHandle() { semdr_config_free(ptr_); }
  semdr_config* get() const { return ptr_; }
  semdr_config** out() { return &ptr_; }

 private:
  semdr_config* ptr_ = nullptr;
};

// File (or defaults), then SEMDR_SEED, then command-line overrides.
semdr_status build_config(const Options& o, ConfigHandle& cfg) {
  semdr_status st = o.config.empty() ? semdr_config_new(cfg.out()) : semdr_config_load(o.config.c_str(), cfg.out());
  if (st != SEMDR_OK) return st;
  if ((st = semdr_config_apply_env(cfg.get())) != SEMDR_OK) return st;
  for (const std::string& kv : o.sets) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "semdr: error: --set expects key=value, got '%s'\n", kv.c_str());
      return SEMDR_ERR_CONFIG;
    }
    st = semdr_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != SEMDR_OK) return st;
  }
  if (o.seed && (st = semdr_config_set(cfg.get(), "seed", std::to_string(*o.seed).c_str())) != SEMDR_OK) return st;
  if (o.epochs && (st = semdr_config_set(cfg.get(), "train.epochs", std::to_string(*o.epochs).c_str())) != SEMDR_OK) {
    return st;
  }
  if (!o.out_dir.empty()) {
    st = semdr_config_set(cfg.get(), "paths.output_dir", ("\"" + o.out_dir + "\"").c_str());
    if (st != SEMDR_OK) return st;
  }
  return SEMDR_OK;
}

void add_config_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON run configuration (defaults when omitted)");
  cmd->add_option("--set", o.sets, "Override a config field, e.g. --set train.epochs=300 (repeatable)");
  cmd->add_option("--seed", o.seed, "Random seed (overrides SEMDR_SEED and the config)");
  cmd->add_option("--out-dir", o.out_dir, "Directory for artifacts (paths.output_dir)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semdr: legal judgment prediction with clue tracing, contrastive pre-training and graph reasoning"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(semdr_version()));
  Options o;
  app.add_flag("--quiet,-q", o.quiet, "Suppress progress lines on stderr");

  CLI::App* trace = app.add_subcommand("trace", "Extract motivation/action/harm clues into JSONL");
  add_config_flags(trace, o);
  trace->add_option("--in", o.in, "Corpus JSONL (defaults to paths.corpus)");
  trace->add_option("--out", o.out, "Output JSONL (defaults to <out-dir>/clues.jsonl)");

  CLI::App* pretrain = app.add_subcommand("pretrain", "Contrastive pre-training of the fact encoder");
  add_config_flags(pretrain, o);

  CLI::App* train = app.add_subcommand("train", "Run the full pipeline and write a checkpoint and metrics");
  add_config_flags(train, o);
  train->add_option("--epochs", o.epochs, "Graph training epochs (train.epochs)");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Score a split with a saved checkpoint");
  add_config_flags(evaluate, o);
  evaluate->add_option("--checkpoint", o.checkpoint, "Checkpoint JSON")->required();
  evaluate->add_option("--split", o.split, "train, validation or test")
      ->check(CLI::IsMember({"train", "validation", "test"}));

  CLI::App* predict = app.add_subcommand("predict", "Predict labels for every case of a JSONL file");
  predict->add_option("--checkpoint", o.checkpoint, "Checkpoint JSON")->required();
  predict->add_option("--in", o.in, "Corpus JSONL")->required();
  predict->add_option("--out", o.out, "Predictions JSONL")->required();

  CLI::App* ablate = app.add_subcommand("ablate", "Train toggle combinations and tabulate test metrics");
  add_config_flags(ablate, o);
  ablate->add_option("--grid", o.grid, "\"full\" for all eight combinations, or a comma list such as full,-graph");
  ablate->add_option("--epochs", o.epochs, "Graph training epochs (train.epochs)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(SEMDR_ERR_ARGUMENT);
  }

  if (!o.quiet) semdr_set_log_callback(print_line, nullptr);

  if (predict->parsed()) {
    return report(semdr_cmd_predict(o.checkpoint.c_str(), o.in.c_str(), o.out.c_str()));
  }

  ConfigHandle cfg;
  semdr_status st = build_config(o, cfg);
  if (st != SEMDR_OK) return report(st);

  if (trace->parsed()) {
    return report(semdr_cmd_trace(cfg.get(), o.in.empty() ? nullptr : o.in.c_str(),
                                  o.out.empty() ? nullptr : o.out.c_str()));
  }
  if (pretrain->parsed()) return report(semdr_cmd_pretrain(cfg.get()));
  if (train->parsed()) return report(semdr_cmd_train(cfg.get(), nullptr));
  if (evaluate->parsed()) {
    char* json = nullptr;
    st = semdr_cmd_evaluate(cfg.get(), o.checkpoint.c_str(), o.split.c_str(), &json);
    if (st == SEMDR_OK) std::cout << json << "\n";
    semdr_string_free(json);
    return report(st);
  }
  if (ablate->parsed()) {
    char* table = nullptr;
    st = semdr_cmd_ablate(cfg.get(), o.grid.c_str(), &table);
    if (st == SEMDR_OK) std::cout << table;
    semdr_string_free(table);
    return report(st);
  }
  return report(SEMDR_ERR_ARGUMENT);
}
