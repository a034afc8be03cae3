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

#ifndef SEMDR_SEMDR_H_
#define SEMDR_SEMDR_H_

/*
 * C interface to the semdr legal judgment prediction library.
 *
 * Every fallible call returns a semdr_status. On failure the message is
 * available from semdr_last_error() on the same thread until the next call.
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function; strings returned through char** outputs are
 * released with semdr_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32 || defined __CYGWIN__
#ifdef SEMDR_BUILDING_LIBRARY
#define SEMDR_API __declspec(dllexport)
#else
#define SEMDR_API __declspec(dllimport)
#endif
#else
#define SEMDR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 2..4 double as CLI exit codes. */
typedef enum semdr_status {
  SEMDR_OK = 0,
  SEMDR_ERR_INTERNAL = 1,
  SEMDR_ERR_CONFIG = 2,
  SEMDR_ERR_DATA = 3,
  SEMDR_ERR_DIVERGED = 4,
  SEMDR_ERR_ARGUMENT = 5
} semdr_status;

typedef enum semdr_task {
  SEMDR_TASK_IMPRISONMENT = 0,
  SEMDR_TASK_CHARGE = 1,
  SEMDR_TASK_ARTICLE = 2
} semdr_task;

typedef struct semdr_config semdr_config;
typedef struct semdr_corpus semdr_corpus;
typedef struct semdr_lexicon semdr_lexicon;
typedef struct semdr_model semdr_model;

typedef void (*semdr_log_fn)(const char* line, void* user_data);

SEMDR_API const char* semdr_version(void);
SEMDR_API const char* semdr_last_error(void);
SEMDR_API void semdr_string_free(char* s);

/* Progress lines from long-running calls. Pass NULL to silence. Process-wide. */
SEMDR_API void semdr_set_log_callback(semdr_log_fn fn, void* user_data);

/* ---- configuration ---------------------------------------------------- */

SEMDR_API semdr_status semdr_config_new(semdr_config** out);
SEMDR_API semdr_status semdr_config_load(const char* path, semdr_config** out);
SEMDR_API semdr_status semdr_config_parse(const char* json_text, semdr_config** out);
/* Dotted key, e.g. "train.epochs"; value is JSON text or a bare string. */
SEMDR_API semdr_status semdr_config_set(semdr_config* config, const char* key, const char* value);
/* Applies SEMDR_SEED from the environment when set. */
SEMDR_API semdr_status semdr_config_apply_env(semdr_config* config);
SEMDR_API semdr_status semdr_config_to_json(const semdr_config* config, char** out);
SEMDR_API void semdr_config_free(semdr_config* config);

/* ---- corpus and lexicon ----------------------------------------------- */

SEMDR_API semdr_status semdr_corpus_load(const char* path, semdr_corpus** out);
SEMDR_API size_t semdr_corpus_size(const semdr_corpus* corpus);
SEMDR_API semdr_status semdr_corpus_label_count(const semdr_corpus* corpus, semdr_task task, size_t* out);
SEMDR_API void semdr_corpus_free(semdr_corpus* corpus);

SEMDR_API semdr_status semdr_lexicon_load(const char* path, semdr_lexicon** out);
SEMDR_API void semdr_lexicon_free(semdr_lexicon* lexicon);

/* Normalized Levenshtein similarity of two UTF-8 strings. */
SEMDR_API semdr_status semdr_fuzzy_score(const char* a, const char* b, double* out);

/* Clue record (JSON object) for one document. */
SEMDR_API semdr_status semdr_trace_text(const semdr_lexicon* lexicon, const char* fact_text,
                                        double threshold, char** clue_json);

/* ---- pipeline commands -------------------------------------------------- */

/* in / out may be NULL to use paths.corpus and <output_dir>/clues.jsonl. */
SEMDR_API semdr_status semdr_cmd_trace(const semdr_config* config, const char* in, const char* out);
SEMDR_API semdr_status semdr_cmd_pretrain(const semdr_config* config);
/* model may be NULL. */
SEMDR_API semdr_status semdr_cmd_train(const semdr_config* config, semdr_model** model);
/* split: "train", "validation" or "test". metrics_json may be NULL. */
SEMDR_API semdr_status semdr_cmd_evaluate(const semdr_config* config, const char* checkpoint,
                                          const char* split, char** metrics_json);
SEMDR_API semdr_status semdr_cmd_predict(const char* checkpoint, const char* in, const char* out);
/* grid: "full" or a comma-separated list such as "full,-graph,-clue". table may be NULL. */
SEMDR_API semdr_status semdr_cmd_ablate(const semdr_config* config, const char* grid, char** table);

/* ---- models ------------------------------------------------------------- */

SEMDR_API semdr_status semdr_model_load(const char* path, semdr_model** out);
SEMDR_API semdr_status semdr_model_save(const semdr_model* model, const char* path);
SEMDR_API size_t semdr_model_dim(const semdr_model* model);
SEMDR_API semdr_status semdr_model_label_count(const semdr_model* model, semdr_task task, size_t* out);
/*
 * Predicts one task for a raw fact description. label receives the predicted
 * label text; proba (may be NULL) receives min(capacity, label_count)
 * probabilities.
 */
SEMDR_API semdr_status semdr_model_predict(const semdr_model* model, const char* fact_text, semdr_task task,
                                           char** label, double* proba, size_t capacity);
SEMDR_API void semdr_model_free(semdr_model* model);

#ifdef __cplusplus
}
#endif

#endif /* SEMDR_SEMDR_H_ */
