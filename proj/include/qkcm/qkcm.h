// Copyright 2026 The qkcm Authors
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

#ifndef QKCM_QKCM_H
#define QKCM_QKCM_H

#include <stddef.h>

#if defined(QKCM_BUILDING_LIBRARY)
#define QKCM_API __attribute__((visibility("default")))
#else
#define QKCM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes of the command-line tool. */
typedef enum {
  QKCM_OK = 0,
  QKCM_USAGE_ERROR = 1,
  QKCM_VERIFICATION_FAILED = 2,
  QKCM_NUMERICAL_FAILURE = 3
} qkcm_status;

typedef struct qkcm_config qkcm_config;
typedef struct qkcm_result qkcm_result;

/* Message of the last failed call on this thread; never NULL. */
QKCM_API const char* qkcm_last_error(void);
QKCM_API const char* qkcm_version(void);

QKCM_API qkcm_status qkcm_config_create(qkcm_config** out);
QKCM_API qkcm_status qkcm_config_load(qkcm_config* config, const char* path);
QKCM_API qkcm_status qkcm_config_set(qkcm_config* config, const char* key, const char* value);
/* Canonical key = value text. Copies at most capacity bytes including the
 * terminator; *needed receives the full size. */
QKCM_API qkcm_status qkcm_config_text(const qkcm_config* config, char* buffer, size_t capacity,
                                      size_t* needed);
QKCM_API void qkcm_config_destroy(qkcm_config* config);

/* Runs the experiment and writes its files; *out is NULL on failure. */
QKCM_API qkcm_status qkcm_run(const qkcm_config* config, qkcm_result** out);
QKCM_API size_t qkcm_result_series_count(const qkcm_result* result);
QKCM_API const char* qkcm_result_series_name(const qkcm_result* result, size_t index);
QKCM_API size_t qkcm_result_series_length(const qkcm_result* result, size_t index);
/* Any of times, values, stderrs may be NULL; stderrs is filled with NaN when
 * the series carries none. */
QKCM_API qkcm_status qkcm_result_series_data(const qkcm_result* result, size_t index,
                                             double* times, double* values, double* stderrs);
QKCM_API const char* qkcm_result_output_path(const qkcm_result* result);
QKCM_API double qkcm_result_wall_seconds(const qkcm_result* result);
QKCM_API void qkcm_result_destroy(qkcm_result* result);

typedef void (*qkcm_report_fn)(const char* name, int passed, const char* detail, void* user);

/* level is "fast" or "full". Returns QKCM_VERIFICATION_FAILED if any check
 * fails; *n_failed (optional) receives the count. */
QKCM_API qkcm_status qkcm_verify(const char* level, qkcm_report_fn report, void* user,
                                 int* n_failed);

/* Compares two t,value,stderr files; the JSON report is returned in a buffer
 * released with qkcm_string_free. out_json may be NULL. */
QKCM_API qkcm_status qkcm_compare(const char* classical_csv, const char* quantum_csv,
                                  char** out_json);
QKCM_API void qkcm_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif
