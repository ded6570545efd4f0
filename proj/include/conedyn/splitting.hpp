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
#include <vector>

#include "conedyn/cone.hpp"
#include "conedyn/dynamics.hpp"

namespace conedyn {

/// Estimated splitting R^n = E_x (+) F_x at one grid point of a trajectory.
struct SplittingFrame {
  double time = 0.0;
  Vec base_point;
  Mat e_basis;  ///< n x k orthonormal
  Mat f_basis;  ///< n x (n-k) orthonormal
  Mat p;        ///< projection onto E along F
  Mat q;        ///< I - P
};

/// Pushes E forward with the trajectory's factors (positive-diagonal QR) and
/// recovers F as the orthogonal complement of the dominant subspace of the
/// adjoint cocycle run backwards from the final time. `e_seed` is an n x k
/// full-rank seed, normally the cone's positive eigenspace; it also seeds the
/// adjoint iteration.
std::vector<SplittingFrame> evolve_frames(const TrajectorySegment& traj, int k, const Mat& e_seed);

/// m(A|E) = inf over unit v in span(frame) of |A v|.
double infimum_norm(const Mat& map_factor, const Mat& frame);

/// Gap metric between subspaces with orthonormal bases of equal dimension,
/// 2 sin(theta_max / 2).
double gap_distance(const Mat& l1, const Mat& l2);

struct LyapunovOptions {
  int k_plus = 0;  ///< number of tracked exponents (0: all)
  int k = 0;       ///< index of the k-exponent (0: k_plus - 1, at least 1)
  double horizon = 200.0;
  double window = 1.0;
  double burn_in_fraction = 0.25;
  double reg_tol = 1e-2;
  IntegratorControl control{};
  std::uint64_t seed = 0x1a9b;
};

struct LyapunovEstimate {
  std::vector<double> exponents;  ///< sorted nonincreasing
  double horizon = 0.0;
  int k = 1;
  double k_exponent = 0.0;
  /// Same exponent accumulated from per-window infimum norms of the k-frame.
  double k_exponent_infimum = 0.0;
  /// Running post-burn-in estimates at each window end: [window][exponent].
  std::vector<std::vector<double>> window_series;
  std::vector<double> window_times;
  double k_dispersion = 0.0;
  bool regular_like = false;
  StepStats stats;
};

LyapunovEstimate lyapunov_spectrum(const SemiflowSystem& sys, const Vec& x0,
                                   const LyapunovOptions& opts);

struct SeparationDiagnostics {
  double m_hat = 0.0;
  double gamma_hat = 0.0;
  double fit_residual = 0.0;
  std::vector<double> times;
  std::vector<double> ratio_series;
  bool separated = false;  ///< gamma_hat < 1 - 1e-3
};

/// Ratio max_{w in F0} |DPhi_t w| / min_{v in E0} |DPhi_t v| along the
/// trajectory and a least-squares fit of log M + t log gamma over the tail
/// half.
SeparationDiagnostics separation_diagnostics(const std::vector<SplittingFrame>& frames,
                                             const TrajectorySegment& traj);

struct ConeMarginsReport {
  double delta_prime = 0.0;
  double c1 = 0.0;
  double max_projection_norm = 0.0;
  std::int64_t samples = 0;
  bool compatible = true;        ///< every E inside Int C and F meets C only at 0
  std::int64_t incompatible_frames = 0;
};

ConeMarginsReport cone_margins(const std::vector<SplittingFrame>& frames, const QuadraticCone& cone,
                               int sample_budget, std::uint64_t seed = 0xc1);

/// Unit vectors of span(frame) used for the delta' mesh (1e3 for k <= 3).
std::vector<Vec> unit_mesh(const Mat& frame, int count = 1000, std::uint64_t seed = 0x3e5);

}  // namespace conedyn
