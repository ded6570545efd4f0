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

#include "conedyn/cone.hpp"
#include "conedyn/dynamics.hpp"
#include "conedyn/sampling.hpp"

namespace conedyn {

struct MonotoneCheckOptions {
  int n_pairs = 500;
  std::vector<double> t_grid{0.5, 1.0, 2.0};
  std::uint64_t seed = 0x6d6f6e6f;
  IntegratorControl control{};
  /// 0: all available workers (capped by CONEDYN_THREADS).
  int threads = 0;
};

struct MonotoneVerdict {
  std::int64_t monotone_violations = 0;
  std::int64_t strong_violations = 0;
  std::int64_t pairs_tested = 0;
  /// Pairs abandoned because an orbit diverged.
  std::int64_t pairs_skipped = 0;
  /// Pair with the smallest propagated normalized form, and its time.
  Vec worst_x;
  Vec worst_y;
  double worst_t = 0.0;
  double min_interior_margin = 0.0;
  StepStats stats;

  bool positive() const { return monotone_violations == 0 && strong_violations == 0; }
};

/// Samples x in the box and y = x + r d with d a unit direction of C and r
/// log-uniform in [1e-4, diam/10]; checks the propagated difference on the
/// time grid (ordered for all t, strongly ordered for t > 0).
MonotoneVerdict check_monotone_pairs(const SemiflowSystem& sys, const QuadraticCone& cone,
                                     const Box& domain, const MonotoneCheckOptions& opts = {});

struct AveragedJacobian {
  Mat t_xy;
  /// |T (y - x) - (Phi_T(y) - Phi_T(x))|
  double residual = 0.0;
  double tolerance = 0.0;
  int nodes_used = 0;
  StepStats stats;
};

/// Gauss-Legendre average of D_{x+s(y-x)} Phi_T over s in [0, 1]. The node
/// count is doubled once if the mean-value identity misses its tolerance;
/// a second miss throws IntegrationError.
AveragedJacobian averaged_jacobian(const SemiflowSystem& sys, const Vec& x, const Vec& y,
                                   double horizon, int quadrature_nodes = 8,
                                   const IntegratorControl& control = {});

struct FocusingOptions {
  double delta = 0.05;
  double horizon = 1.0;
  double kappa_target = 1e-3;
  int pairs_per_point = 4;
  int quadrature_nodes = 8;
  std::uint64_t seed = 0xf0c5;
  IntegratorControl control{};
  SeparationIndexOptions separation{};
  int threads = 0;
};

struct FocusingFailure {
  Vec z;
  Vec x;
  Vec y;
  double kappa = 0.0;
  std::string reason;
};

struct FocusingCertificate {
  double delta = 0.0;
  double horizon = 0.0;
  double kappa_target = 0.0;
  double kappa_min = 0.0;
  std::int64_t pairs = 0;
  std::vector<FocusingFailure> failures;
  bool positive = false;
  StepStats stats;
};

FocusingCertificate strongly_focusing_check(const SemiflowSystem& sys, const QuadraticCone& cone,
                                            const std::vector<Vec>& sigma_samples,
                                            const FocusingOptions& opts);

struct InfinitesimalReport {
  bool positive = false;
  /// Smallest over the points of max_lambda min eig(J^T Q + Q J - lambda Q).
  double worst_margin = 0.0;
  Vec worst_point;
  double worst_lambda = 0.0;
};

InfinitesimalReport infinitesimal_invariance_check(const SemiflowSystem& sys,
                                                   const QuadraticCone& cone,
                                                   const std::vector<Vec>& points,
                                                   double lambda_lo, double lambda_hi);

}  // namespace conedyn
