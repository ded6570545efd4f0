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
#include "conedyn/splitting.hpp"

namespace conedyn {

struct ClassificationTolerances {
  double sep_tol = 1e-8;
  double eq_diam_tol = 1e-5;
  double eq_rhs_tol = 1e-6;
  double per_tol = 1e-5;
  double t_min = 1e-2;
  double trich_tol = 5e-2;
  double inst_tol = 1e-3;
  double dich_tol = 1e-6;
  double colim_tol = 1e-4;

  void validate() const;
};

struct PseudoOrderWitness {
  double t1 = 0.0;
  double t2 = 0.0;
  /// Normalized quadratic form of Phi_t1(x) - Phi_t2(x).
  double difference_form = 0.0;
  MembershipClass membership = MembershipClass::Outside;
  bool found = false;
};

/// Lag-ordered scan for two distinct ordered orbit points. A stride-16
/// subsample is scanned first and hits are refined on the full grid.
PseudoOrderWitness detect_pseudo_ordered(const TrajectorySegment& traj, const QuadraticCone& cone,
                                         double sep_tol = 1e-8);

struct RecurrenceCandidate {
  double period = 0.0;
  double mismatch = 0.0;
};

struct OmegaCloud {
  std::vector<double> times;
  std::vector<Vec> points;
  double min_rhs_norm = 0.0;
  double diameter = 0.0;
  std::vector<RecurrenceCandidate> recurrence_candidates;
  StepStats stats;
};

/// Builds the cloud from the samples of `traj` at times >= transient.
OmegaCloud omega_from_trajectory(const SemiflowSystem& sys, const TrajectorySegment& traj,
                                 double transient, const IntegratorControl& control = {});

/// Integrates to transient + window and keeps the window's samples. Throws
/// DivergenceError for unbounded orbits.
OmegaCloud estimate_omega(const SemiflowSystem& sys, const Vec& x0, double transient,
                          double window, const IntegratorControl& control = {});

enum class OmegaClass { Equilibrium, PeriodicOrbit, Other, Unresolved };

const char* to_string(OmegaClass c);

struct OmegaClassification {
  OmegaClass cls = OmegaClass::Other;
  Vec equilibrium;                 ///< refined root of f (Equilibrium)
  double equilibrium_residual = 0.0;
  bool equilibrium_test = false;
  double period = 0.0;             ///< validated period (PeriodicOrbit)
  double period_mismatch = 0.0;
  bool periodic_test = false;
  bool contains_equilibrium = false;
  std::size_t cloud_size = 0;
};

OmegaClassification classify_omega(const SemiflowSystem& sys, const OmegaCloud& cloud,
                                   const ClassificationTolerances& tol = {},
                                   const IntegratorControl& control = {});

/// Damped Newton iteration for f(x) = 0; returns the best iterate.
Vec refine_equilibrium(const SemiflowSystem& sys, const Vec& guess, int max_iter = 100);

enum class TrichotomyCase { A, B, C, Unresolved };

const char* to_string(TrichotomyCase c);

struct TrichotomyOptions {
  int spectrum_budget = 2;
  double horizon = 200.0;
  double window = 1.0;
  std::uint64_t seed = 0x7c;
  IntegratorControl control{};
};

struct TrichotomyPoint {
  Vec point;
  bool ok = false;
  double lambda_k = 0.0;
  bool regular_like = false;
  std::string error;
};

struct TrichotomyReport {
  TrichotomyCase result = TrichotomyCase::Unresolved;
  /// Smallest lambda_k among successful estimates.
  double lambda_k = 0.0;
  std::vector<TrichotomyPoint> points;
  StepStats stats;
};

TrichotomyReport trichotomy_case(const SemiflowSystem& sys, const OmegaCloud& cloud,
                                 const QuadraticCone& cone, const TrichotomyOptions& opts = {},
                                 const ClassificationTolerances& tol = {});

/// Farthest-point subsample of at most `count` points.
std::vector<Vec> farthest_point_subsample(const std::vector<Vec>& points, int count);

struct InstabilityOptions {
  int n_perturbations = 8;  ///< per perturbation size
  double horizon = 10.0;
  std::vector<double> sizes{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::uint64_t seed = 0x1257;
  IntegratorControl control{};
};

struct InstabilityReport {
  /// min over perturbations of max_{t <= horizon} |Phi_t(y) - Phi_t(x0)|
  double delta_lower_bound = 0.0;
  std::vector<double> per_size_min;
  std::int64_t perturbations = 0;
  bool positive = false;
};

InstabilityReport instability_check(const SemiflowSystem& sys, const QuadraticCone& cone,
                                    const Vec& x0, const InstabilityOptions& opts = {},
                                    const ClassificationTolerances& tol = {});

struct DichotomyOptions {
  int n_neighbors = 100;
  double radius = 1e-3;
  double horizon = 40.0;
  std::uint64_t seed = 0xd1c;
  IntegratorControl control{};
};

struct DichotomyReport {
  std::int64_t neighbors = 0;
  std::int64_t converged = 0;  ///< branch (a)
  std::int64_t ordered = 0;    ///< branch (b) only
  std::int64_t undecided = 0;
  double fraction = 0.0;
  bool positive = false;
};

DichotomyReport local_dichotomy_check(const SemiflowSystem& sys, const QuadraticCone& cone,
                                      const Vec& x0, const DichotomyOptions& opts = {},
                                      const ClassificationTolerances& tol = {});

enum class ColimitBranch { Inapplicable, Equilibrium, PseudoOrdered, Neither };

const char* to_string(ColimitBranch b);

struct ColimitReport {
  ColimitBranch branch = ColimitBranch::Inapplicable;
  Vec z;
  double final_gap = 0.0;
  double cluster_radius = 0.0;
};

ColimitReport colimit_check(const SemiflowSystem& sys, const QuadraticCone& cone, const Vec& x,
                            const Vec& y, const std::vector<double>& t_sequence,
                            const ClassificationTolerances& tol = {},
                            const IntegratorControl& control = {});

struct OrbitOptions {
  double transient = 60.0;
  double window = 20.0;
  IntegratorControl control{};
  TrichotomyOptions trichotomy{};
  bool run_trichotomy = true;
};

struct OrbitReport {
  Vec x0;
  bool bounded = true;
  std::string failure;  ///< non-empty when the pipeline raised
  PseudoOrderWitness pseudo_ordered;
  OmegaClassification omega;
  OmegaCloud cloud;
  TrichotomyReport trichotomy;
  bool in_q = false;
  bool in_ce = false;
  bool in_qe = false;
  StepStats stats;
};

/// Full per-orbit pipeline: trajectory, pseudo-order scan, omega cloud,
/// classification and (optionally) the lambda_k trichotomy. Divergence is
/// recorded as an unbounded orbit rather than thrown.
OrbitReport classify_orbit(const SemiflowSystem& sys, const QuadraticCone& cone, const Vec& x0,
                           const OrbitOptions& opts = {},
                           const ClassificationTolerances& tol = {});

}  // namespace conedyn
