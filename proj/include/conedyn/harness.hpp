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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conedyn/classification.hpp"
#include "conedyn/config.hpp"
#include "conedyn/monotonicity.hpp"

namespace conedyn {

struct PbTable {
  /// Samples with a pseudo-order witness and no equilibrium in the cloud.
  std::int64_t subpopulation = 0;
  std::int64_t periodic = 0;
  /// Indices of subpopulation samples not classified PeriodicOrbit.
  std::vector<std::int64_t> counterexamples;
  /// Validated periods found in the subpopulation.
  double period_min = 0.0;
  double period_max = 0.0;

  bool applicable() const { return subpopulation > 0; }
  double rate() const;
};

struct ExperimentReport {
  ExperimentMode mode = ExperimentMode::Generic;
  std::vector<OrbitReport> per_sample;
  bool monotone_checked = false;
  MonotoneVerdict monotone;
  std::vector<std::string> warnings;
  std::int64_t bounded = 0;
  std::int64_t unbounded = 0;
  std::int64_t count_q = 0;
  std::int64_t count_ce = 0;
  std::int64_t count_qe = 0;
  std::int64_t count_unresolved = 0;
  std::int64_t count_neither = 0;
  /// Fractions are over bounded samples.
  double fraction_q = 0.0;
  double fraction_ce = 0.0;
  double fraction_qe = 0.0;
  double fraction_unresolved = 0.0;
  double fraction_neither = 0.0;
  /// 95% Wilson interval for fraction_QE.
  double qe_lower = 0.0;
  double qe_upper = 0.0;
  PbTable pb;
  StepStats stats;
};

inline constexpr const char* kGenericityDisclaimer =
    "Fractions are Monte-Carlo estimates over a finite low-discrepancy sample of the box. "
    "Open-and-dense genericity cannot be certified by sampling; a high fraction is "
    "evidence, not proof.";

/// Sample points of the configured box (scrambled Sobol, seeded).
std::vector<Vec> experiment_samples(const ExperimentConfig& cfg);

/// `threads` overrides cfg.threads when >= 0 (0: all workers).
ExperimentReport run_generic_experiment(const ExperimentConfig& cfg, int threads = -1);

/// Requires cone rank 2 (ConfigError otherwise).
ExperimentReport run_pb_experiment(const ExperimentConfig& cfg, int threads = -1);

OrbitOptions orbit_options(const ExperimentConfig& cfg);

std::string report_json(const ExperimentReport& rep, const ExperimentConfig& cfg);

/// Columns: idx, x0_1..x0_n, pseudo_ordered, omega_class, period, lambda_k,
/// trichotomy, in_QE.
std::string report_csv(const ExperimentReport& rep);

std::string report_summary(const ExperimentReport& rep);

}  // namespace conedyn
