// Copyright 2026 The conedyn Authors
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

#ifndef CONEDYN_CONEDYN_H
#define CONEDYN_CONEDYN_H

#include <stddef.h>
#include <stdint.h>

#if defined(CONEDYN_BUILDING_LIBRARY)
#define CONEDYN_API __attribute__((visibility("default")))
#else
#define CONEDYN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum conedyn_status {
  CONEDYN_OK = 0,
  CONEDYN_E_INPUT = 1,
  CONEDYN_E_CONFIG = 2,
  CONEDYN_E_INTEGRATION = 3,
  CONEDYN_E_DIVERGENCE = 4,
  CONEDYN_E_SPLITTING = 5,
  CONEDYN_E_INSUFFICIENT_DATA = 6,
  CONEDYN_E_IO = 7,
  CONEDYN_E_INTERNAL = 8
} conedyn_status;

typedef enum conedyn_mode {
  CONEDYN_MODE_FROM_CONFIG = 0,
  CONEDYN_MODE_GENERIC = 1,
  CONEDYN_MODE_PB = 2
} conedyn_mode;

typedef struct conedyn_config conedyn_config;
typedef struct conedyn_result conedyn_result;
typedef struct conedyn_cone conedyn_cone;

CONEDYN_API const char* conedyn_version(void);
CONEDYN_API const char* conedyn_status_name(conedyn_status status);

/* Message of the last failed call on this thread ("" if none). */
CONEDYN_API const char* conedyn_last_error(void);

CONEDYN_API conedyn_status conedyn_config_load_file(const char* path, conedyn_config** out);
CONEDYN_API conedyn_status conedyn_config_parse(const char* json_text, conedyn_config** out);
CONEDYN_API void conedyn_config_free(conedyn_config* cfg);
CONEDYN_API int conedyn_config_dim(const conedyn_config* cfg);
CONEDYN_API conedyn_status conedyn_config_set_seed(conedyn_config* cfg, uint64_t seed);
CONEDYN_API conedyn_status conedyn_config_set_samples(conedyn_config* cfg, int64_t n_samples);
/* 0 uses every available worker; CONEDYN_THREADS caps the count. */
CONEDYN_API conedyn_status conedyn_config_set_threads(conedyn_config* cfg, int threads);

/* x0 may be NULL to start at the centre of the configured domain. */
CONEDYN_API conedyn_status conedyn_simulate(const conedyn_config* cfg, const double* x0,
                                            double t_end, conedyn_result** out);
CONEDYN_API conedyn_status conedyn_lyapunov(const conedyn_config* cfg, const double* x0,
                                            double horizon, double window,
                                            conedyn_result** out);
CONEDYN_API conedyn_status conedyn_monotone_check(const conedyn_config* cfg, int n_pairs,
                                                  conedyn_result** out);
/* points: n_points rows of dim doubles, row-major. */
CONEDYN_API conedyn_status conedyn_focusing_check(const conedyn_config* cfg,
                                                  const double* points, size_t n_points,
                                                  double delta, double horizon, double kappa,
                                                  int pairs_per_point, conedyn_result** out);
CONEDYN_API conedyn_status conedyn_classify(const conedyn_config* cfg, const double* x0,
                                            conedyn_result** out);
CONEDYN_API conedyn_status conedyn_run_experiment(const conedyn_config* cfg, conedyn_mode mode,
                                                  conedyn_result** out);

/* Strings are owned by the result and live until conedyn_result_free. */
CONEDYN_API const char* conedyn_result_json(const conedyn_result* res);
CONEDYN_API const char* conedyn_result_csv(const conedyn_result* res);
CONEDYN_API const char* conedyn_result_summary(const conedyn_result* res);
/* format: "json" or "csv". The write is atomic. */
CONEDYN_API conedyn_status conedyn_result_write(const conedyn_result* res, const char* path,
                                                const char* format);
CONEDYN_API void conedyn_result_free(conedyn_result* res);

/* q: n x n row-major symmetric matrix of signature (k, n - k). */
CONEDYN_API conedyn_status conedyn_cone_create(const double* q, int n, int k, conedyn_cone** out);
CONEDYN_API void conedyn_cone_free(conedyn_cone* cone);
/* cls: 0 interior, 1 boundary, 2 outside. form may be NULL. */
CONEDYN_API conedyn_status conedyn_cone_membership(const conedyn_cone* cone, const double* v,
                                                   int* cls, double* form);
CONEDYN_API conedyn_status conedyn_cone_distance(const conedyn_cone* cone, const double* unit_v,
                                                 double* out);
/* r: n x n row-major. */
CONEDYN_API conedyn_status conedyn_cone_separation_index(const conedyn_cone* cone,
                                                         const double* r, double* kappa);

#ifdef __cplusplus
}
#endif

#endif
