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

#include <cstdlib>
#include <cstring>
#include <memory>
#include <mutex>
#include <new>
#include <string>

#include "semdr/semdr.h"
#include "semdr/checkpoint.hpp"
#include "semdr/clue_tracer.hpp"
#include "semdr/commands.hpp"
#include "semdr/config.hpp"
#include "semdr/corpus.hpp"
#include "semdr/errors.hpp"
#include "semdr/predictor.hpp"

struct semdr_config {
  semdr::RunConfig value;
};

struct semdr_corpus {
  semdr::Corpus value;
};

struct semdr_lexicon {
  semdr::Lexicon value;
};

struct semdr_model {
  semdr::Model value;
};

namespace {

thread_local std::string g_last_error;

std::mutex g_log_mutex;
semdr_log_fn g_log_fn = nullptr;
void* g_log_user = nullptr;

void emit(const std::string& line) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  if (g_log_fn) g_log_fn(line.c_str(), g_log_user);
}

const semdr::LogFn& logger() {
  static const semdr::LogFn fn = [](const std::string& line) { emit(line); };
  return fn;
}

semdr_status fail(semdr_status status, const char* what) {
  g_last_error = what;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
semdr_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return SEMDR_OK;
  } catch (const semdr::ConfigError& e) {
    return fail(SEMDR_ERR_CONFIG, e.what());
  } catch (const semdr::DataError& e) {
    return fail(SEMDR_ERR_DATA, e.what());
  } catch (const semdr::DivergenceError& e) {
    return fail(SEMDR_ERR_DIVERGED, e.what());
  } catch (const semdr::ArgumentError& e) {
    return fail(SEMDR_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SEMDR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SEMDR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SEMDR_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* name) {
  if (!p) throw semdr::ArgumentError(std::string(name) + " must not be NULL");
}

semdr::Task to_task(semdr_task t) {
  switch (t) {
    case SEMDR_TASK_IMPRISONMENT:
      return semdr::Task::Imprisonment;
    case SEMDR_TASK_CHARGE:
      return semdr::Task::Charge;
    case SEMDR_TASK_ARTICLE:
      return semdr::Task::Article;
  }
  throw semdr::ArgumentError("unknown task");
}

}  // namespace

extern "C" {

const char* semdr_version(void) { return "1.0.0"; }

const char* semdr_last_error(void) { return g_last_error.c_str(); }

void semdr_string_free(char* s) { std::free(s); }

void semdr_set_log_callback(semdr_log_fn fn, void* user_data) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  g_log_fn = fn;
  g_log_user = user_data;
}

semdr_status semdr_config_new(semdr_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new semdr_config{semdr::RunConfig()};
  });
}

semdr_status semdr_config_load(const char* path, semdr_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new semdr_config{semdr::RunConfig::load(path)};
  });
}

semdr_status semdr_config_parse(const char* json_text, semdr_config** out) {
  return guarded([&] {
    require(json_text, "json_text");
    require(out, "out");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      throw semdr::ConfigError(std::string("config: ") + e.what());
    }
    *out = new semdr_config{semdr::RunConfig::from_json(doc)};
  });
}

semdr_status semdr_config_set(semdr_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    config->value.set(key, value);
  });
}

semdr_status semdr_config_apply_env(semdr_config* config) {
  return guarded([&] {
    require(config, "config");
    config->value.apply_environment();
  });
}

semdr_status semdr_config_to_json(const semdr_config* config, char** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = copy_string(config->value.dump());
  });
}

void semdr_config_free(semdr_config* config) { delete config; }

semdr_status semdr_corpus_load(const char* path, semdr_corpus** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new semdr_corpus{semdr::load_corpus(path)};
  });
}

size_t semdr_corpus_size(const semdr_corpus* corpus) { return corpus ? corpus->value.size() : 0; }

semdr_status semdr_corpus_label_count(const semdr_corpus* corpus, semdr_task task, size_t* out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(out, "out");
    *out = corpus->value.vocab(to_task(task)).size();
  });
}

void semdr_corpus_free(semdr_corpus* corpus) { delete corpus; }

semdr_status semdr_lexicon_load(const char* path, semdr_lexicon** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new semdr_lexicon{semdr::Lexicon::load(path)};
  });
}

void semdr_lexicon_free(semdr_lexicon* lexicon) { delete lexicon; }

semdr_status semdr_fuzzy_score(const char* a, const char* b, double* out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    if (!*a || !*b) throw semdr::ArgumentError("fuzzy_score: inputs must be non-empty");
    *out = semdr::fuzzy_score(a, b);
  });
}

semdr_status semdr_trace_text(const semdr_lexicon* lexicon, const char* fact_text, double threshold,
                              char** clue_json) {
  return guarded([&] {
    require(lexicon, "lexicon");
    require(fact_text, "fact_text");
    require(clue_json, "clue_json");
    if (!*fact_text) throw semdr::ArgumentError("fact_text must be non-empty");
    semdr::CriminalCase c;
    c.id = "text";
    c.fact_text = fact_text;
    semdr::trace_case(c, lexicon->value, threshold);
    *clue_json = copy_string(semdr::clue_record(c).dump());
  });
}

semdr_status semdr_cmd_trace(const semdr_config* config, const char* in, const char* out) {
  return guarded([&] {
    require(config, "config");
    std::optional<std::filesystem::path> in_path, out_path;
    if (in) in_path = in;
    if (out) out_path = out;
    semdr::cmd_trace(config->value, in_path, out_path, logger());
  });
}

semdr_status semdr_cmd_pretrain(const semdr_config* config) {
  return guarded([&] {
    require(config, "config");
    semdr::cmd_pretrain(config->value, logger());
  });
}

semdr_status semdr_cmd_train(const semdr_config* config, semdr_model** model) {
  return guarded([&] {
    require(config, "config");
    semdr::PipelineResult result = semdr::cmd_train(config->value, logger());
    if (model) *model = new semdr_model{std::move(result.model)};
  });
}

semdr_status semdr_cmd_evaluate(const semdr_config* config, const char* checkpoint, const char* split,
                                char** metrics_json) {
  return guarded([&] {
    require(config, "config");
    require(checkpoint, "checkpoint");
    const auto reports = semdr::cmd_evaluate(config->value, checkpoint, split ? split : "test", logger());
    if (metrics_json) *metrics_json = copy_string(semdr::to_json(reports).dump());
  });
}

semdr_status semdr_cmd_predict(const char* checkpoint, const char* in, const char* out) {
  return guarded([&] {
    require(checkpoint, "checkpoint");
    require(in, "in");
    require(out, "out");
    semdr::cmd_predict(checkpoint, in, out, logger());
  });
}

semdr_status semdr_cmd_ablate(const semdr_config* config, const char* grid, char** table) {
  return guarded([&] {
    require(config, "config");
    const std::string t = semdr::cmd_ablate(config->value, grid ? grid : "full", logger());
    if (table) *table = copy_string(t);
  });
}

semdr_status semdr_model_load(const char* path, semdr_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new semdr_model{semdr::load_checkpoint(path)};
  });
}

semdr_status semdr_model_save(const semdr_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    semdr::save_checkpoint(model->value, path);
  });
}

size_t semdr_model_dim(const semdr_model* model) { return model ? model->value.encoder.dim() : 0; }

semdr_status semdr_model_label_count(const semdr_model* model, semdr_task task, size_t* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    *out = model->value.vocabs[semdr::task_index(to_task(task))].size();
  });
}

semdr_status semdr_model_predict(const semdr_model* model, const char* fact_text, semdr_task task,
                                 char** label, double* proba, size_t capacity) {
  return guarded([&] {
    require(model, "model");
    require(fact_text, "fact_text");
    require(label, "label");
    if (!*fact_text) throw semdr::ArgumentError("fact_text must be non-empty");
    if (!model->value.encoder.is_hashed()) {
      throw semdr::ArgumentError("raw-text prediction needs the hashed encoder backend");
    }
    const semdr::Task t = to_task(task);
    semdr::CriminalCase c;
    c.id = "text";
    c.fact_text = fact_text;
    semdr::prepare_case(model->value, c);
    const semdr::Vec logits = semdr::score(model->value, c, t);
    const semdr::Vec p = semdr::predict_proba(logits);
    if (proba) {
      const size_t n = std::min(capacity, static_cast<size_t>(p.size()));
      for (size_t k = 0; k < n; ++k) proba[k] = p[static_cast<Eigen::Index>(k)];
    }
    *label = copy_string(model->value.vocabs[semdr::task_index(t)].text(semdr::predict_label(logits)));
  });
}

void semdr_model_free(semdr_model* model) { delete model; }

}  // extern "C"
