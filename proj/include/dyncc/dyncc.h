/* Copyright 2026 The dyncc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef DYNCC_DYNCC_H_
#define DYNCC_DYNCC_H_

/* C interface to libdyncc. Every call returns a dyncc_status; on failure the
 * message for the calling thread is available from dyncc_last_error() until
 * that thread's next failing call. Handles are not thread-safe; distinct
 * handles may be used concurrently. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DYNCC_BUILDING_LIBRARY)
#define DYNCC_API __declspec(dllexport)
#else
#define DYNCC_API __declspec(dllimport)
#endif
#else
#define DYNCC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dyncc_status {
  DYNCC_OK = 0,
  DYNCC_INVALID_ARGUMENT = 1,
  DYNCC_INSUFFICIENT_RESULTS = 2,
  DYNCC_DECODE_FAILURE = 3,
  DYNCC_NOT_READY = 4,
  DYNCC_VALIDATION_ERROR = 5,
  DYNCC_IO_ERROR = 6,
  DYNCC_RUNTIME_ERROR = 7
} dyncc_status;

typedef struct dyncc_config dyncc_config;
typedef struct dyncc_episode dyncc_episode;

DYNCC_API const char* dyncc_version(void);
DYNCC_API const char* dyncc_status_name(dyncc_status status);
/* Never NULL; empty when the thread has not failed yet. */
DYNCC_API const char* dyncc_last_error(void);

/* ---- configuration ---------------------------------------------------- */

/* Preset scenario 1-4 with N1 and N2 divided by `scale`. */
DYNCC_API dyncc_status dyncc_config_create_preset(int preset, double scale,
                                                  dyncc_config** out);
/* INI file; see docs/config.md. A manifest written by an experiment loads. */
DYNCC_API dyncc_status dyncc_config_load(const char* path, dyncc_config** out);
/* Sets "section.key" to `value` and revalidates. On error the config is
 * unchanged. */
DYNCC_API dyncc_status dyncc_config_set(dyncc_config* config, const char* key,
                                        const char* value);
/* Copies the resolved config as INI text into buf (NUL-terminated, truncated
 * to capacity). *needed receives the full length including the NUL. */
DYNCC_API dyncc_status dyncc_config_format(const dyncc_config* config, char* buf,
                                           size_t capacity, size_t* needed);
DYNCC_API void dyncc_config_destroy(dyncc_config* config);

/* ---- experiments ------------------------------------------------------ */

/* Runs the experiment named by experiment.name and writes <name>.csv and
 * <name>.manifest into out_dir. The one-line summary is copied to `summary`
 * (may be NULL) with the same truncation rules as dyncc_config_format. */
DYNCC_API dyncc_status dyncc_run_experiment(const dyncc_config* config, const char* out_dir,
                                            char* summary, size_t capacity);

/* ---- single episodes -------------------------------------------------- */

/* strategy: "uncoded", "coded" or "dynamic". */
DYNCC_API dyncc_status dyncc_episode_run(const dyncc_config* config, const char* strategy,
                                         uint64_t seed, int record_events,
                                         dyncc_episode** out);
DYNCC_API void dyncc_episode_destroy(dyncc_episode* episode);

DYNCC_API dyncc_status dyncc_episode_success(const dyncc_episode* episode, int* out);
DYNCC_API dyncc_status dyncc_episode_completion_time(const dyncc_episode* episode,
                                                     double* out);
DYNCC_API dyncc_status dyncc_episode_horizon(const dyncc_episode* episode, double* out);
DYNCC_API dyncc_status dyncc_episode_piece_length(const dyncc_episode* episode, size_t* b,
                                                  size_t* s);
DYNCC_API dyncc_status dyncc_episode_pieces_dispatched(const dyncc_episode* episode,
                                                       size_t* out);
DYNCC_API dyncc_status dyncc_episode_redundancy_used(const dyncc_episode* episode,
                                                     size_t* out);
DYNCC_API dyncc_status dyncc_episode_event_count(const dyncc_episode* episode, size_t* out);
/* Result length is N1 + N2 - 1 when the config computes payloads, else 0.
 * Copies min(length, capacity) values. */
DYNCC_API dyncc_status dyncc_episode_result(const dyncc_episode* episode, double* out,
                                            size_t capacity, size_t* length);
/* CSV event log; requires record_events. */
DYNCC_API dyncc_status dyncc_episode_write_events(const dyncc_episode* episode,
                                                  const char* path);

/* ---- numerics --------------------------------------------------------- */

/* Linear convolution; out must hold na + nx - 1 values. method: "fft" or
 * "direct". */
DYNCC_API dyncc_status dyncc_convolve(const double* a, size_t na, const double* x, size_t nx,
                                      const char* method, double* out, size_t out_capacity);

#ifdef __cplusplus
}
#endif

#endif /* DYNCC_DYNCC_H_ */
