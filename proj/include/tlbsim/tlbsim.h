// Copyright 2026 The tlbsim Authors
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

/*
 * C interface to the tlbsim library.
 *
 * All objects are opaque handles created and released through this API.
 * Every fallible call returns a tlbsim_status; on failure a description of
 * the most recent error on the calling thread is available from
 * tlbsim_last_error(). Strings returned through `char**` out-parameters are
 * heap-allocated and must be released with tlbsim_string_free().
 */
#ifndef TLBSIM_H
#define TLBSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TLBSIM_BUILDING)
#    define TLBSIM_API __declspec(dllexport)
#  else
#    define TLBSIM_API __declspec(dllimport)
#  endif
#else
#  define TLBSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tlbsim_status {
  TLBSIM_OK = 0,
  TLBSIM_ERR_INVALID_ARGUMENT = 1,
  TLBSIM_ERR_CANONICALITY = 2,
  TLBSIM_ERR_ALIGNMENT = 3,
  TLBSIM_ERR_PAGE_FAULT = 4,
  TLBSIM_ERR_MAPPING_CONFLICT = 5,
  TLBSIM_ERR_PARSE = 6,
  TLBSIM_ERR_CONFIG = 7,
  TLBSIM_ERR_UNDEFINED_METRIC = 8,
  TLBSIM_ERR_INTERNAL_CONSISTENCY = 9,
  TLBSIM_ERR_IO = 10,
  TLBSIM_ERR_INTERNAL = 11
} tlbsim_status;

typedef enum tlbsim_format {
  TLBSIM_FORMAT_JSON = 0,
  TLBSIM_FORMAT_CSV = 1,
  TLBSIM_FORMAT_TEXT = 2 /* tlbsim_presets_describe only */
} tlbsim_format;

typedef enum tlbsim_access_kind {
  TLBSIM_FETCH = 0,
  TLBSIM_LOAD = 1,
  TLBSIM_STORE = 2
} tlbsim_access_kind;

typedef enum tlbsim_source {
  TLBSIM_SOURCE_L1 = 0,
  TLBSIM_SOURCE_SUPERPAGE = 1,
  TLBSIM_SOURCE_L2 = 2,
  TLBSIM_SOURCE_WALK = 3
} tlbsim_source;

typedef struct tlbsim_translation {
  uint64_t pa;
  tlbsim_source source;
  uint64_t cycles;
  uint32_t walk_accesses;
  int permission_fault;
} tlbsim_translation;

typedef struct tlbsim_step_result {
  tlbsim_translation fetch;
  int has_data;
  tlbsim_translation data;
  uint64_t cycles;
} tlbsim_step_result;

typedef struct tlbsim_config tlbsim_config;
typedef struct tlbsim_sim tlbsim_sim;
typedef struct tlbsim_report tlbsim_report;

/* Errors and strings. */
TLBSIM_API const char* tlbsim_last_error(void);
TLBSIM_API const char* tlbsim_status_name(tlbsim_status status);
TLBSIM_API void tlbsim_string_free(char* str);
TLBSIM_API const char* tlbsim_version(void);

/* Configuration. */
TLBSIM_API tlbsim_status tlbsim_config_load(const char* path, tlbsim_config** out);
TLBSIM_API tlbsim_status tlbsim_config_parse(const char* json_text, const char* base_dir,
                                             tlbsim_config** out);
TLBSIM_API tlbsim_status tlbsim_config_from_preset(const char* name, tlbsim_config** out);
/* Replaces the trace with a file path; fails if the config already has one
 * unless `replace` is nonzero. */
TLBSIM_API tlbsim_status tlbsim_config_set_trace_file(tlbsim_config* config, const char* path,
                                                      int replace);
TLBSIM_API tlbsim_status tlbsim_config_set_trace_spec(tlbsim_config* config,
                                                      const char* spec_json, int replace);
TLBSIM_API tlbsim_status tlbsim_config_set_seed(tlbsim_config* config, uint64_t seed);
/* `path` may be NULL to keep the report in memory only. */
TLBSIM_API tlbsim_status tlbsim_config_set_output(tlbsim_config* config, const char* path,
                                                  tlbsim_format format);
TLBSIM_API tlbsim_status tlbsim_config_set_format(tlbsim_config* config, tlbsim_format format);
TLBSIM_API tlbsim_status tlbsim_config_get_format(const tlbsim_config* config,
                                                  tlbsim_format* out);
TLBSIM_API void tlbsim_config_free(tlbsim_config* config);

/* Whole runs. */
TLBSIM_API tlbsim_status tlbsim_run(const tlbsim_config* config, tlbsim_report** out);
TLBSIM_API tlbsim_status tlbsim_report_emit(const tlbsim_report* report, tlbsim_format format,
                                            char** out_text);
/* Reads a counter by dotted key, e.g. "l2.misses" or "derived.l2_mpki". */
TLBSIM_API tlbsim_status tlbsim_report_get(const tlbsim_report* report, const char* key,
                                           double* out);
TLBSIM_API void tlbsim_report_free(tlbsim_report* report);

/* Sweep described by a config file with a `variants` array. `seed_override`
 * and `trace_override` are applied when non-NULL. */
TLBSIM_API tlbsim_status tlbsim_sweep_file(const char* path, const uint64_t* seed_override,
                                           const char* trace_override, tlbsim_format format,
                                           char** out_text);

TLBSIM_API tlbsim_status tlbsim_presets_describe(tlbsim_format format, char** out_text);

/* Generates a synthetic trace from a JSON generator spec and writes it to
 * `path` (gzip when the name ends in .gz). */
TLBSIM_API tlbsim_status tlbsim_generate_trace(const char* spec_json, const char* path,
                                               uint64_t* out_records);

/* Step-by-step simulation. */
TLBSIM_API tlbsim_status tlbsim_sim_create(const tlbsim_config* config, tlbsim_sim** out);
TLBSIM_API tlbsim_status tlbsim_sim_translate(tlbsim_sim* sim, uint64_t va,
                                              tlbsim_access_kind kind, tlbsim_translation* out);
/* `data_kind` is ignored unless `has_data` is nonzero. */
TLBSIM_API tlbsim_status tlbsim_sim_step(tlbsim_sim* sim, uint64_t pc, int has_data,
                                         tlbsim_access_kind data_kind, uint64_t data_va,
                                         tlbsim_step_result* out);
/* Global flush when `va` is NULL. */
TLBSIM_API tlbsim_status tlbsim_sim_sfence(tlbsim_sim* sim, const uint64_t* va);
TLBSIM_API tlbsim_status tlbsim_sim_oracle(const tlbsim_sim* sim, uint64_t va, uint64_t* out_pa);
TLBSIM_API tlbsim_status tlbsim_sim_map(tlbsim_sim* sim, uint64_t va, uint64_t page_bytes,
                                        uint64_t* out_ppn);
/* Valid entries per structure: 0 itlb, 1 dtlb, 2 superpage, 3 l2. */
TLBSIM_API tlbsim_status tlbsim_sim_occupancy(const tlbsim_sim* sim, int structure,
                                              uint64_t* out);
TLBSIM_API tlbsim_status tlbsim_sim_report(const tlbsim_sim* sim, tlbsim_report** out);
TLBSIM_API void tlbsim_sim_free(tlbsim_sim* sim);

#ifdef __cplusplus
}
#endif

#endif /* TLBSIM_H */
