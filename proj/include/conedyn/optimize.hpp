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

#include <functional>
#include <vector>

#include "conedyn/linalg.hpp"

namespace conedyn::optimize {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
ScalarOptimum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double x_tol = 1e-10, int max_iter = 200);

ScalarOptimum golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                                 double x_tol = 1e-10, int max_iter = 200);

/// Root of f on [a, b] where f(a), f(b) have opposite signs (TOMS 748).
double bracketed_root(const std::function<double(double)>& f, double a, double b,
                      double fa, double fb, int max_iter = 200);

struct SimplexResult {
  Vec x;
  double value = 0.0;
  int evaluations = 0;
};

/// Derivative-free Nelder-Mead minimization (adaptive coefficients).
SimplexResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0,
                          double initial_step, double f_tol = 1e-13, int max_evals = 4000);

/// Gauss-Legendre nodes and weights mapped to [0, 1].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Quadrature gauss_legendre_unit(int n);

}  // namespace conedyn::optimize
