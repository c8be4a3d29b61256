// Copyright 2026 The gecval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the gecval library. Every function returns a status code;
 * on failure gecval_last_error() describes the problem (per thread). Strings
 * returned through out-parameters are owned by the caller and released with
 * gecval_string_free. */
#ifndef GECVAL_GECVAL_H
#define GECVAL_GECVAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(GECVAL_BUILDING_LIBRARY)
#define GECVAL_API __attribute__((visibility("default")))
#else
#define GECVAL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gecval_status {
  GECVAL_OK = 0,
  GECVAL_INVALID_ARGUMENT = 1,
  GECVAL_PARSE = 2,
  GECVAL_DATA = 3,
  GECVAL_IO = 4,
  GECVAL_TRANSPORT = 5, /* grammar service unreachable */
  GECVAL_PROTOCOL = 6,  /* grammar service answered non-2xx */
  GECVAL_DECODE = 7,    /* grammar service body unreadable */
  GECVAL_INTERNAL = 8
} gecval_status;

typedef struct gecval_corpus gecval_corpus;
typedef struct gecval_checker gecval_checker;
typedef struct gecval_report gecval_report;

GECVAL_API const char* gecval_version(void);
/* Message of the last failed call on this thread, "" if none. */
GECVAL_API const char* gecval_last_error(void);
GECVAL_API const char* gecval_status_name(gecval_status status);
GECVAL_API void gecval_string_free(char* s);

/* ---- corpus ---- */

/* merge_overlaps: 1 merges overlapping edits of an annotation, 0 rejects them.
 * discard_uncorrected: 1 drops sentences some annotator left unchanged. */
GECVAL_API gecval_status gecval_corpus_load(const char* m2_path, const char* const* ref_paths, size_t n_refs,
                                            int merge_overlaps, int discard_uncorrected, gecval_corpus** out);
GECVAL_API gecval_status gecval_corpus_parse(const char* m2_text, int merge_overlaps, int discard_uncorrected,
                                             gecval_corpus** out);
GECVAL_API void gecval_corpus_free(gecval_corpus* corpus);
GECVAL_API size_t gecval_corpus_size(const gecval_corpus* corpus);
GECVAL_API gecval_status gecval_corpus_summary(const gecval_corpus* corpus, char** json_out);
/* Reference `ref` of sentence `index` (realized annotations first, then
 * external references). */
GECVAL_API gecval_status gecval_corpus_reference(const gecval_corpus* corpus, size_t index, size_t ref, char** out);
GECVAL_API gecval_status gecval_corpus_write_m2(const gecval_corpus* corpus, char** out);
/* Number of edit-combination references per sentence as a JSON array of
 * objects {"sentence": id, "count": "<decimal>"}. */
GECVAL_API gecval_status gecval_corpus_count_imeasure(const gecval_corpus* corpus, char** json_out);

/* ---- metrics ---- */

GECVAL_API int gecval_metric_known(const char* name);
/* Scores one sentence. `checker` may be NULL unless the metric is "lt". */
GECVAL_API gecval_status gecval_score(const char* metric, const char* source, const char* candidate,
                                      const char* const* references, size_t n_references, uint64_t seed,
                                      gecval_checker* checker, double* out);

/* ---- grammar checkers ---- */

GECVAL_API gecval_status gecval_checker_offline(gecval_checker** out);
/* base_url NULL or "" falls back to the GECVAL_GRAMMAR_ENDPOINT variable. */
GECVAL_API gecval_status gecval_checker_remote(const char* base_url, int timeout_ms, int max_retries,
                                               double max_requests_per_second, gecval_checker** out);
GECVAL_API gecval_status gecval_checker_count(gecval_checker* checker, const char* text, size_t* errors_out);
GECVAL_API void gecval_checker_free(gecval_checker* checker);

/* ---- experiments ---- */

/* config_json: see the README for keys. `checker` may be NULL unless "lt"
 * is among the metrics. */
GECVAL_API gecval_status gecval_run(const gecval_corpus* corpus, const char* config_json, gecval_checker* checker,
                                    gecval_report** out);
GECVAL_API gecval_status gecval_report_json(const gecval_report* report, char** json_out);
/* format: "tsv" or "json". Always writes manifest.json as well. */
GECVAL_API gecval_status gecval_report_write(const gecval_report* report, const char* out_dir, const char* format);
GECVAL_API void gecval_report_free(gecval_report* report);

/* Tab-separated dump of every sampled correction for the configuration. */
GECVAL_API gecval_status gecval_dump_samples(const gecval_corpus* corpus, const char* config_json, char** out);

#ifdef __cplusplus
}
#endif

#endif /* GECVAL_GECVAL_H */
