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

#include "conedyn/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/tools/roots.hpp>

#include "conedyn/errors.hpp"

namespace conedyn::optimize {

namespace {
constexpr double kInvPhi = 0.6180339887498949;
}

ScalarOptimum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double x_tol, int max_iter) {
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  ScalarOptimum best{c, fc};
  if (fd > best.value) best = {d, fd};
  // Endpoints matter for monotone objectives.
  const double fa = f(lo);
  const double fb = f(hi);
  if (fa > best.value) best = {lo, fa};
  if (fb > best.value) best = {hi, fb};
  return best;
}

ScalarOptimum golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                                 double x_tol, int max_iter) {
  auto r = golden_section_max([&](double x) { return -f(x); }, lo, hi, x_tol, max_iter);
  return {r.x, -r.value};
}

double bracketed_root(const std::function<double(double)>& f, double a, double b, double fa,
                      double fb, int max_iter) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
  auto tol = [](double lo, double hi) {
    return std::abs(hi - lo) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                    std::max({1.0, std::abs(lo), std::abs(hi)});
  };
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  return 0.5 * (r.first + r.second);
}

SimplexResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0,
                          double initial_step, double f_tol, int max_evals) {
  const Eigen::Index n = x0.size();
  const double dn = static_cast<double>(n);
  // Gao-Han adaptive parameters behave better than the classic ones for n > 2.
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / dn;
  const double gamma = 0.75 - 1.0 / (2.0 * dn);
  const double delta = 1.0 - 1.0 / dn;

  std::vector<Vec> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> vals(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<std::size_t>(i + 1)](i) += initial_step;
  int evals = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    vals[i] = f(pts[i]);
    ++evals;
  }
  std::vector<std::size_t> order(pts.size());
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return vals[i] < vals[j]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];
    if (std::abs(vals[worst] - vals[best]) <= f_tol * (1.0 + std::abs(vals[best]))) {
      double spread = 0.0;
      for (const auto& p : pts) spread = std::max(spread, (p - pts[best]).cwiseAbs().maxCoeff());
      if (spread < 1e-9) break;
    }
    Vec centroid = Vec::Zero(n);
    for (std::size_t i : order) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= dn;
    Vec xr = centroid + alpha * (centroid - pts[worst]);
    double fr = f(xr);
    ++evals;
    if (fr < vals[best]) {
      Vec xe = centroid + beta * (xr - centroid);
      double fe = f(xe);
      ++evals;
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    Vec xc = outside ? Vec(centroid + gamma * (xr - centroid))
                     : Vec(centroid - gamma * (centroid - pts[worst]));
    double fc = f(xc);
    ++evals;
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + delta * (pts[i] - pts[best]);
      vals[i] = f(pts[i]);
      ++evals;
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  const auto idx = static_cast<std::size_t>(it - vals.begin());
  return {pts[idx], vals[idx], evals};
}

Quadrature gauss_legendre_unit(int n) {
  if (n < 1) throw InputError("quadrature needs at least one node");
  Quadrature q;
  q.nodes.resize(static_cast<std::size_t>(n));
  q.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 0 ? 1.0 : (n == 1 ? x : p1);
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double pn = n == 1 ? x : p1;
    const double pnm1 = n == 1 ? 1.0 : p0;
    dp = n * (x * pn - pnm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto idx = static_cast<std::size_t>(n - 1 - i);
    q.nodes[idx] = 0.5 * (x + 1.0);
    q.weights[idx] = 0.5 * w;
  }
  return q;
}

}  // namespace conedyn::optimize
