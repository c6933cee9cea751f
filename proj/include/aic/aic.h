// Copyright 2026 The AIC Toolkit Authors.
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
// C interface to the AIC toolkit. All handles are opaque; every fallible call
// returns an aic_status and leaves a message retrievable via aic_last_error()
// on the calling thread. Strings returned through char** are owned by the
// caller and released with aic_string_free().

#ifndef AIC_AIC_H_
#define AIC_AIC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AIC_API __declspec(dllexport)
#else
#define AIC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aic_status {
  AIC_OK = 0,
  AIC_INVALID_ARGUMENT = 1,
  AIC_NOT_FOUND = 2,
  AIC_FAILED_PRECONDITION = 3,
  AIC_OUT_OF_RANGE = 4,
  AIC_RESOURCE_EXHAUSTED = 5,
  AIC_UNAUTHENTICATED = 6,
  AIC_ALREADY_EXISTS = 7,
  AIC_INTERNAL = 8,
  AIC_UNAVAILABLE = 9,
} aic_status;

AIC_API const char* aic_version(void);
AIC_API const char* aic_status_name(aic_status status);
// Message of the last failed call on this thread; "" after success.
AIC_API const char* aic_last_error(void);
AIC_API void aic_string_free(char* s);

// ---- catalog ---------------------------------------------------------------

typedef struct aic_manifest aic_manifest;

AIC_API aic_status aic_manifest_load(const char* path, aic_manifest** out);
AIC_API void aic_manifest_free(aic_manifest* manifest);
AIC_API aic_status aic_manifest_write(const aic_manifest* manifest, const char* path);
AIC_API size_t aic_manifest_stimulus_count(const aic_manifest* manifest);

typedef struct aic_match_result {
  int quality;
  double actual_bpp;
  double adjusted_target_bpp;
  double relative_deviation;
  int evaluations;
  int out_of_range;      // target outside the reachable range
  int within_tolerance;  // |deviation| <= tolerance
} aic_match_result;

// Returns 0 and sets *bpp on success; nonzero marks an encoder failure.
typedef int (*aic_bpp_probe)(void* user, int quality, double* bpp);

// Matches with the codec's encode command, run in work_dir.
AIC_API aic_status aic_catalog_match(const aic_manifest* manifest, const char* source_id,
                                     const char* codec_id, double target_bpp,
                                     double tolerance, const char* work_dir,
                                     aic_match_result* out);
// Matches against a caller-supplied encoder.
AIC_API aic_status aic_catalog_match_probe(const aic_manifest* manifest,
                                           const char* source_id, const char* codec_id,
                                           double target_bpp, double tolerance,
                                           aic_bpp_probe probe, void* user,
                                           aic_match_result* out);
// Matches every stimulus, updates quality and actual_bpp in place, and returns
// a per-stimulus report table.
AIC_API aic_status aic_catalog_match_all(aic_manifest* manifest, double tolerance,
                                         const char* work_dir, char** report);

// ---- design ----------------------------------------------------------------

typedef struct aic_design_options {
  const char* method;  // "btc" | "ptc"
  int cross_count;
  int batch_size;
  int balanced;
  uint64_t seed;
} aic_design_options;

AIC_API void aic_design_options_default(aic_design_options* options);
// Writes the design file. An existing design at out_path holding the other
// method is merged when merge is nonzero.
AIC_API aic_status aic_design_generate(const aic_manifest* manifest,
                                       const aic_design_options* options,
                                       const char* out_path, int merge);

// ---- response store and service -------------------------------------------

typedef struct aic_store aic_store;
typedef struct aic_server aic_server;

typedef struct aic_store_options {
  int max_batches_per_participant;
  int target_instances;
  int fsync;
} aic_store_options;

AIC_API void aic_store_options_default(aic_store_options* options);
// design_path may be NULL to reopen an existing data directory.
AIC_API aic_status aic_store_open(const char* data_dir, const char* design_path,
                                  const aic_store_options* options, aic_store** out);
AIC_API void aic_store_free(aic_store* store);
// Returns {"participant_id", "token", "method"} as JSON.
AIC_API aic_status aic_store_enroll(aic_store* store, const char* method, char** json);
// Returns {"batch_id", "method", "questions": [...]} as JSON.
AIC_API aic_status aic_store_assign(aic_store* store, const char* participant_id,
                                    char** json);
// response_json: {"participant_id", "batch_id", "triplet_id", "choice",
// "response_time_ms", "toggle_count", "submitted_at_ms"}.
AIC_API aic_status aic_store_record(aic_store* store, const char* response_json,
                                    int* duplicate, int* batch_completed);
AIC_API size_t aic_store_response_count(const aic_store* store);
// method may be NULL for both; manifest may be NULL (summary then judges by level).
AIC_API aic_status aic_store_export(const aic_store* store, const aic_manifest* manifest,
                                    const char* method, const char* out_path);

typedef struct aic_server_options {
  const char* host;
  int port;  // 0 picks a free port
  const char* admin_token;
  const char* asset_root;
} aic_server_options;

AIC_API aic_status aic_server_start(aic_store* store, const aic_manifest* manifest,
                                    const aic_server_options* options, aic_server** out);
AIC_API int aic_server_port(const aic_server* server);
// Blocks until aic_server_stop() is called from another thread or a signal.
AIC_API aic_status aic_server_wait(aic_server* server);
AIC_API void aic_server_stop(aic_server* server);
AIC_API void aic_server_free(aic_server* server);

// ---- analysis --------------------------------------------------------------

typedef struct aic_clean_summary {
  int retained_btc;
  int retained_ptc;
  int excluded_btc;
  int excluded_ptc;
} aic_clean_summary;

AIC_API aic_status aic_clean(const aic_manifest* manifest, const char* responses_path,
                             double threshold, const char* out_path,
                             const char* report_path, aic_clean_summary* summary);

typedef struct aic_fit_options {
  double k;
  int restarts;
  uint64_t seed;
  int max_iterations;
} aic_fit_options;

AIC_API void aic_fit_options_default(aic_fit_options* options);
AIC_API aic_status aic_fit(const aic_manifest* manifest, const char* responses_path,
                           const aic_fit_options* options, const char* model_path);

typedef struct aic_bootstrap_options {
  int replicates;
  int grid_size;
  uint64_t seed;
  int stratified;
  int threads;  // 0 uses the hardware concurrency
  aic_fit_options fit;
} aic_bootstrap_options;

AIC_API void aic_bootstrap_options_default(aic_bootstrap_options* options);
// mean_width_at_1jnd may be NULL.
AIC_API aic_status aic_bootstrap(const aic_manifest* manifest, const char* responses_path,
                                 const char* model_path, const aic_bootstrap_options* options,
                                 const char* bands_path, double* mean_width_at_1jnd);
// bands_path may be NULL.
AIC_API aic_status aic_plot_data(const aic_manifest* manifest, const char* model_path,
                                 const char* bands_path, int grid_size, const char* out_path);
typedef enum aic_significance {
  AIC_SIGNIFICANCE_NONE = 0,
  AIC_SIGNIFICANCE_OVERALL = 1,
  AIC_SIGNIFICANCE_PER_CODEC = 2,
  AIC_SIGNIFICANCE_PER_SOURCE = 3,
} aic_significance;

// models_path is a model file (.json) or a bands file.
AIC_API aic_status aic_bench(const aic_manifest* manifest, const char* models_path,
                             const char* scores_dir, aic_significance significance,
                             const char* out_path);

typedef struct aic_simulate_options {
  int responses_per_triplet;
  double not_sure_propensity;
  double guesser_fraction;
  uint64_t seed;
} aic_simulate_options;

AIC_API void aic_simulate_options_default(aic_simulate_options* options);
AIC_API aic_status aic_simulate(const aic_manifest* manifest, const char* design_path,
                                const char* truth_path, const aic_simulate_options* options,
                                const char* out_path);

// ---- pipeline --------------------------------------------------------------

// stages: comma-separated subset, or NULL / "" for all. report_json may be NULL.
AIC_API aic_status aic_run(const char* config_path, const char* stages, char** report_json);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // AIC_AIC_H_
