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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conedyn/linalg.hpp"

namespace conedyn {

/// Autonomous ODE x' = f(x) with analytic Jacobian; defines the semiflow
/// Phi_t and its derivative D_x Phi_t. Immutable and shareable.
class SemiflowSystem {
 public:
  using RhsFn = std::function<void(const Vec& x, Vec& dx)>;
  using JacobianFn = std::function<void(const Vec& x, Mat& jac)>;

  SemiflowSystem(std::string name, int dim, RhsFn rhs, JacobianFn jacobian,
                 std::map<std::string, double> params = {});

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const std::map<std::string, double>& params() const { return params_; }

  Vec rhs(const Vec& x) const;
  Mat jacobian(const Vec& x) const;
  void rhs_into(const Vec& x, Vec& dx) const { rhs_(x, dx); }
  void jacobian_into(const Vec& x, Mat& jac) const { jac_(x, jac); }

 private:
  std::string name_;
  int dim_;
  RhsFn rhs_;
  JacobianFn jac_;
  std::map<std::string, double> params_;
};

/// Catalog entry: name plus scalar parameters, and the matrix for `linear`.
struct SystemSpec {
  std::string name;
  std::map<std::string, double> params;
  std::optional<Mat> matrix;
};

/// Builds a catalog system: linear(A), hopf3d(a, b), rot_contract(omega, mu,
/// c), grad_well(m), feedback3(g). Unknown names and bad parameters throw
/// InputError.
SemiflowSystem build_system(const SystemSpec& spec);
SemiflowSystem linear_system(const Mat& a);

enum class IntegratorMethod { Rk4Fixed, Rk45Adaptive };

const char* to_string(IntegratorMethod m);

struct IntegratorControl {
  IntegratorMethod method = IntegratorMethod::Rk45Adaptive;
  double rtol = 1e-9;
  double atol = 1e-12;
  /// Step of rk4_fixed (substeps are equalized per output interval).
  double step = 1e-3;
  /// Output spacing.
  double stride = 0.1;
  std::uint64_t max_steps = 50'000'000;
  /// States with a larger norm count as divergence.
  double divergence_bound = 1e12;
};

struct StepStats {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t rhs_evaluations = 0;

  StepStats& operator+=(const StepStats& o) {
    accepted += o.accepted;
    rejected += o.rejected;
    rhs_evaluations += o.rhs_evaluations;
    return *this;
  }
};

/// Sampled orbit. When `factors` is populated, factors[0] = I and the
/// product factors[j] ... factors[1] equals D_{x0} Phi_{t_j}.
struct TrajectorySegment {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Mat> factors;
  StepStats stats;

  std::size_t size() const { return times.size(); }
  bool has_factors() const { return !factors.empty(); }
};

/// Grid 0, stride, 2 stride, ..., t_end (last interval may be shorter).
std::vector<double> uniform_grid(double t_end, double stride);

TrajectorySegment integrate(const SemiflowSystem& sys, const Vec& x0, double t_end,
                            const IntegratorControl& control = {});

/// Integrates x' = f(x) together with M' = J(x) M, restarting M = I every
/// `renorm_stride`; the output grid is the renorm grid.
TrajectorySegment integrate_with_variational(const SemiflowSystem& sys, const Vec& x0,
                                             double t_end, const IntegratorControl& control,
                                             double renorm_stride);

/// Final state of integrate; t = 0 returns x0 exactly.
Vec flow_map(const SemiflowSystem& sys, const Vec& x0, double t,
             const IntegratorControl& control = {});

/// D_{x0} Phi_t as a single matrix (use for moderate t only).
Mat flow_derivative(const SemiflowSystem& sys, const Vec& x0, double t,
                    const IntegratorControl& control = {});

/// Two orbits integrated as (x, d = y - x) with d' = f(x + d) - f(x), so the
/// difference keeps relative accuracy even when |d| << |x|.
struct PairTrajectory {
  std::vector<double> times;
  std::vector<Vec> base;
  std::vector<Vec> difference;
  StepStats stats;
};

PairTrajectory integrate_pair(const SemiflowSystem& sys, const Vec& x, const Vec& y,
                              const std::vector<double>& times,
                              const IntegratorControl& control = {});

}  // namespace conedyn
