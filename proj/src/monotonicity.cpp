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

#include "conedyn/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "conedyn/errors.hpp"
#include "conedyn/optimize.hpp"
#include "parallel.hpp"

namespace conedyn {

namespace {

struct PairOutcome {
  bool skipped = false;
  std::int64_t monotone = 0;
  std::int64_t strong = 0;
  double margin = std::numeric_limits<double>::infinity();
  double margin_t = 0.0;
  Vec x;
  Vec y;
  StepStats stats;
};

}  // namespace

MonotoneVerdict check_monotone_pairs(const SemiflowSystem& sys, const QuadraticCone& cone,
                                     const Box& domain, const MonotoneCheckOptions& opts) {
  domain.validate();
  const int n = sys.dim();
  if (cone.dim() != n || domain.dim() != n) throw InputError("monotone check: dimension mismatch");
  if (opts.n_pairs < 1) throw InputError("monotone check: n_pairs must be positive");
  if (opts.t_grid.empty()) throw InputError("monotone check: empty time grid");
  std::vector<double> times = opts.t_grid;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (times.front() < 0.0) throw InputError("monotone check: negative time");

  const int k = cone.rank();
  const double r_lo = 1e-4;
  const double r_hi = std::max(r_lo, domain.diameter() / 10.0);
  std::vector<PairOutcome> outcomes(static_cast<std::size_t>(opts.n_pairs));
  detail::parallel_for(outcomes.size(), opts.threads, [&](std::size_t i) {
    Rng rng(stream_seed(opts.seed, i));
    PairOutcome& out = outcomes[i];
    Vec x(n);
    for (int j = 0; j < n; ++j) x(j) = rng.uniform(domain.lower(j), domain.upper(j));
    // 80% interior directions, 20% close to the boundary.
    const bool near_boundary = rng.uniform() < 0.2;
    const double rho = near_boundary ? rng.uniform(0.95, 1.0) : rng.uniform(0.0, 0.95);
    const Vec a = rng.normal_vector(k);
    const Vec b = rng.normal_vector(n - k);
    const Vec d = cone.cone_direction(a, b, rho);
    const double r = std::exp(rng.uniform(std::log(r_lo), std::log(r_hi)));
    out.x = x;
    out.y = x + r * d;
    try {
      const PairTrajectory pt = integrate_pair(sys, out.x, out.y, times, opts.control);
      out.stats = pt.stats;
      for (std::size_t j = 0; j < pt.times.size(); ++j) {
        const ConeMembership m = cone.membership(pt.difference[j]);
        if (m.cls == MembershipClass::Outside) ++out.monotone;
        if (pt.times[j] > 0.0 && m.cls != MembershipClass::Interior) ++out.strong;
        if (m.normalized_form < out.margin) {
          out.margin = m.normalized_form;
          out.margin_t = pt.times[j];
        }
      }
    } catch (const DivergenceError&) {
      out.skipped = true;
    } catch (const IntegrationError&) {
      out.skipped = true;
    }
  });

  MonotoneVerdict v;
  v.min_interior_margin = std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    if (o.skipped) {
      ++v.pairs_skipped;
      continue;
    }
    ++v.pairs_tested;
    v.monotone_violations += o.monotone;
    v.strong_violations += o.strong;
    v.stats += o.stats;
    if (o.margin < v.min_interior_margin) {
      v.min_interior_margin = o.margin;
      v.worst_x = o.x;
      v.worst_y = o.y;
      v.worst_t = o.margin_t;
    }
  }
  if (v.pairs_tested == 0) v.min_interior_margin = 0.0;
  return v;
}

AveragedJacobian averaged_jacobian(const SemiflowSystem& sys, const Vec& x, const Vec& y,
                                   double horizon, int quadrature_nodes,
                                   const IntegratorControl& control) {
  const int n = sys.dim();
  if (x.size() != n || y.size() != n) throw InputError("averaged_jacobian: dimension mismatch");
  if (!(horizon > 0.0)) throw InputError("averaged_jacobian: horizon must be positive");
  if (quadrature_nodes < 2) throw InputError("averaged_jacobian: need at least 2 nodes");

  AveragedJacobian out;
  const Vec d = y - x;
  if (d.norm() == 0.0) {
    out.t_xy = flow_derivative(sys, x, horizon, control);
    out.nodes_used = 1;
    out.tolerance = 1e-6;
    return out;
  }
  const PairTrajectory pair = integrate_pair(sys, x, y, {0.0, horizon}, control);
  const Vec flow_gap = pair.difference.back();
  out.stats += pair.stats;
  out.tolerance = 1e-6 * (1.0 + flow_gap.norm());

  int nodes = quadrature_nodes;
  for (int attempt = 0; attempt < 2; ++attempt, nodes *= 2) {
    const optimize::Quadrature gl = optimize::gauss_legendre_unit(nodes);
    Mat sum = Mat::Zero(n, n);
    for (int i = 0; i < nodes; ++i) {
      const Vec xs = x + gl.nodes[static_cast<std::size_t>(i)] * d;
      const TrajectorySegment seg = integrate_with_variational(sys, xs, horizon, control, horizon);
      out.stats += seg.stats;
      sum += gl.weights[static_cast<std::size_t>(i)] * seg.factors.back();
    }
    out.t_xy = sum;
    out.nodes_used = nodes;
    out.residual = (sum * d - flow_gap).norm();
    if (out.residual <= out.tolerance) return out;
  }
  throw IntegrationError("averaged_jacobian: mean-value identity residual " +
                             std::to_string(out.residual) + " exceeds tolerance",
                         horizon);
}

FocusingCertificate strongly_focusing_check(const SemiflowSystem& sys, const QuadraticCone& cone,
                                            const std::vector<Vec>& sigma_samples,
                                            const FocusingOptions& opts) {
  if (sigma_samples.empty()) throw InputError("focusing check: empty point set");
  if (!(opts.delta > 0.0) || !(opts.horizon > 0.0)) {
    throw InputError("focusing check: delta and horizon must be positive");
  }
  if (opts.pairs_per_point < 1) throw InputError("focusing check: pairs_per_point must be positive");
  if (cone.dim() != sys.dim()) throw InputError("focusing check: dimension mismatch");
  for (const Vec& z : sigma_samples) {
    if (z.size() != sys.dim()) throw InputError("focusing check: point dimension mismatch");
  }

  struct Slot {
    Vec z;
    Vec x;
    Vec y;
    double kappa = 0.0;
    bool failed = false;
    std::string reason;
    StepStats stats;
  };
  const std::size_t per = static_cast<std::size_t>(opts.pairs_per_point);
  std::vector<Slot> slots(sigma_samples.size() * per);
  detail::parallel_for(slots.size(), opts.threads, [&](std::size_t i) {
    Slot& s = slots[i];
    Rng rng(stream_seed(opts.seed, i));
    s.z = sigma_samples[i / per];
    s.x = rng.in_ball(s.z, opts.delta);
    s.y = rng.in_ball(s.z, opts.delta);
    try {
      const AveragedJacobian aj =
          averaged_jacobian(sys, s.x, s.y, opts.horizon, opts.quadrature_nodes, opts.control);
      s.stats = aj.stats;
      SeparationIndexOptions so = opts.separation;
      so.seed = stream_seed(opts.separation.seed, i);
      const FocusingReport rep = cone.separation_index(aj.t_xy, so);
      s.kappa = rep.kappa;
      if (!rep.strongly_positive) {
        s.failed = true;
        s.reason = "image cone not inside the interior";
      } else if (rep.kappa < opts.kappa_target) {
        s.failed = true;
        s.reason = "separation index below target";
      }
    } catch (const Error& e) {
      s.failed = true;
      s.kappa = 0.0;
      s.reason = e.what();
    }
  });

  FocusingCertificate cert;
  cert.delta = opts.delta;
  cert.horizon = opts.horizon;
  cert.kappa_target = opts.kappa_target;
  cert.kappa_min = std::numeric_limits<double>::infinity();
  for (const Slot& s : slots) {
    ++cert.pairs;
    cert.stats += s.stats;
    cert.kappa_min = std::min(cert.kappa_min, s.kappa);
    if (s.failed) cert.failures.push_back({s.z, s.x, s.y, s.kappa, s.reason});
  }
  cert.positive = cert.failures.empty() && cert.kappa_min >= opts.kappa_target;
  return cert;
}

InfinitesimalReport infinitesimal_invariance_check(const SemiflowSystem& sys,
                                                   const QuadraticCone& cone,
                                                   const std::vector<Vec>& points,
                                                   double lambda_lo, double lambda_hi) {
  if (cone.dim() != sys.dim()) throw InputError("infinitesimal check: dimension mismatch");
  if (!(lambda_hi >= lambda_lo)) throw InputError("infinitesimal check: empty lambda interval");
  const Mat& q = cone.matrix();
  InfinitesimalReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  Mat j(sys.dim(), sys.dim());
  for (const Vec& p : points) {
    if (p.size() != sys.dim()) throw InputError("infinitesimal check: point dimension mismatch");
    sys.jacobian_into(p, j);
    const Mat base = j.transpose() * q + q * j;
    auto min_eig = [&](double lambda) {
      const Mat m = base - lambda * q;
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
      return es.eigenvalues()(0);
    };
    const optimize::ScalarOptimum best = optimize::golden_section_max(min_eig, lambda_lo, lambda_hi);
    if (best.value < rep.worst_margin) {
      rep.worst_margin = best.value;
      rep.worst_point = p;
      rep.worst_lambda = best.x;
    }
  }
  if (points.empty()) rep.worst_margin = 0.0;
  rep.positive = !points.empty() && rep.worst_margin >= -1e-9;
  return rep;
}

}  // namespace conedyn
