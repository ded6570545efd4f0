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

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "conedyn/conedyn.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static const char* kHopf =
    "{\"schema\": \"conedyn-config/1\","
    " \"system\": {\"name\": \"hopf3d\", \"params\": {\"a\": 1, \"b\": 4}},"
    " \"cone\": {\"Q\": [[1,0,0],[0,1,0],[0,0,-1]], \"rank\": 2},"
    " \"domain\": {\"lower\": [-0.9,-0.9,-1], \"upper\": [0.9,0.9,1]},"
    " \"integrator\": {\"stride\": 0.05},"
    " \"experiment\": {\"mode\": \"pb\", \"n_samples\": 4, \"seed\": 3, \"monotone_pairs\": 40},"
    " \"spectrum\": {\"budget\": 1, \"horizon\": 50}}";

static void test_cone(void) {
  const double q[9] = {1, 0, 0, 0, 1, 0, 0, 0, -1};
  conedyn_cone* cone = NULL;
  EXPECT(conedyn_cone_create(q, 3, 2, &cone) == CONEDYN_OK);
  const double v[3] = {1, 0, 0};
  int cls = -1;
  double form = 0;
  EXPECT(conedyn_cone_membership(cone, v, &cls, &form) == CONEDYN_OK);
  EXPECT(cls == 0 && fabs(form - 1.0) < 1e-15);
  const double w[3] = {0, 0, 1};
  EXPECT(conedyn_cone_membership(cone, w, &cls, NULL) == CONEDYN_OK && cls == 2);
  double d = 0;
  EXPECT(conedyn_cone_distance(cone, v, &d) == CONEDYN_OK);
  EXPECT(fabs(d - sqrt(0.5)) < 1e-12);
  const double r[9] = {2, 0, 0, 0, 2, 0, 0, 0, 1};
  double kappa = 0;
  EXPECT(conedyn_cone_separation_index(cone, r, &kappa) == CONEDYN_OK);
  EXPECT(fabs(kappa - 1.0 / sqrt(10.0)) < 1e-6);
  conedyn_cone_free(cone);

  const double bad[4] = {1, 0, 0, 1};
  cone = NULL;
  EXPECT(conedyn_cone_create(bad, 2, 1, &cone) == CONEDYN_E_INPUT);
  EXPECT(cone == NULL);
  EXPECT(strlen(conedyn_last_error()) > 0);
  EXPECT(conedyn_cone_create(NULL, 2, 1, &cone) == CONEDYN_E_INPUT);
}

static void test_config(void) {
  conedyn_config* cfg = NULL;
  EXPECT(conedyn_config_parse("{\"schema\": 1}", &cfg) == CONEDYN_E_CONFIG);
  EXPECT(cfg == NULL);
  EXPECT(conedyn_config_load_file("/nonexistent.json", &cfg) == CONEDYN_E_CONFIG);
  EXPECT(conedyn_config_parse(kHopf, &cfg) == CONEDYN_OK);
  EXPECT(conedyn_config_dim(cfg) == 3);
  EXPECT(conedyn_config_set_samples(cfg, 0) == CONEDYN_E_CONFIG);
  EXPECT(conedyn_config_set_samples(cfg, 3) == CONEDYN_OK);
  EXPECT(conedyn_config_set_threads(cfg, 2) == CONEDYN_OK);

  conedyn_result* res = NULL;
  const double x0[3] = {0.1, 0, 0.5};
  EXPECT(conedyn_classify(cfg, x0, &res) == CONEDYN_OK);
  EXPECT(strstr(conedyn_result_json(res), "PeriodicOrbit") != NULL);
  EXPECT(strstr(conedyn_result_summary(res), "PeriodicOrbit") != NULL);
  conedyn_result_free(res);

  res = NULL;
  EXPECT(conedyn_simulate(cfg, NULL, 1.0, &res) == CONEDYN_OK);
  EXPECT(strncmp(conedyn_result_csv(res), "t,", 2) == 0);
  EXPECT(conedyn_result_write(res, "/nonexistent-dir/x.csv", "csv") == CONEDYN_E_IO);
  EXPECT(conedyn_result_write(res, "capi_sim.csv", "yaml") == CONEDYN_E_INPUT);
  EXPECT(conedyn_result_write(res, "capi_sim.csv", "csv") == CONEDYN_OK);
  remove("capi_sim.csv");
  conedyn_result_free(res);

  res = NULL;
  EXPECT(conedyn_monotone_check(cfg, 40, &res) == CONEDYN_OK);
  EXPECT(strstr(conedyn_result_json(res), "\"monotone_violations\": 0") != NULL);
  conedyn_result_free(res);

  res = NULL;
  EXPECT(conedyn_run_experiment(cfg, CONEDYN_MODE_FROM_CONFIG, &res) == CONEDYN_OK);
  EXPECT(strstr(conedyn_result_json(res), "\"pb_table\"") != NULL);
  conedyn_result_free(res);

  res = NULL;
  EXPECT(conedyn_classify(cfg, x0, NULL) == CONEDYN_E_INPUT);
  EXPECT(conedyn_lyapunov(cfg, x0, -1.0, 1.0, &res) == CONEDYN_E_INPUT);
  conedyn_config_free(cfg);
}

int main(void) {
  EXPECT(strlen(conedyn_version()) > 0);
  EXPECT(strcmp(conedyn_status_name(CONEDYN_E_DIVERGENCE), "divergence") == 0);
  conedyn_result_free(NULL);
  conedyn_config_free(NULL);
  conedyn_cone_free(NULL);
  test_cone();
  test_config();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("c api ok\n");
  return 0;
}
