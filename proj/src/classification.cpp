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

#include "conedyn/classification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "conedyn/errors.hpp"
#include "conedyn/optimize.hpp"
#include "conedyn/sampling.hpp"

namespace conedyn {

namespace {

constexpr std::size_t kCoarseStride = 16;
// Clouds smaller than this are treated as points; no recurrence search.
constexpr double kMinRecurrenceDiameter = 1e-4;
constexpr std::size_t kMaxRecurrenceCandidates = 4;
constexpr double kColimitWindow = 20.0;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string("tolerance ") + name + " must be positive");
  }
}

}  // namespace

void ClassificationTolerances::validate() const {
  require_positive(sep_tol, "sep_tol");
  require_positive(eq_diam_tol, "eq_diam_tol");
  require_positive(eq_rhs_tol, "eq_rhs_tol");
  require_positive(per_tol, "per_tol");
  require_positive(t_min, "t_min");
  require_positive(trich_tol, "trich_tol");
  require_positive(inst_tol, "inst_tol");
  require_positive(dich_tol, "dich_tol");
  require_positive(colim_tol, "colim_tol");
}

const char* to_string(OmegaClass c) {
  switch (c) {
    case OmegaClass::Equilibrium: return "Equilibrium";
    case OmegaClass::PeriodicOrbit: return "PeriodicOrbit";
    case OmegaClass::Other: return "Other";
    case OmegaClass::Unresolved: return "Unresolved";
  }
  return "?";
}

const char* to_string(TrichotomyCase c) {
  switch (c) {
    case TrichotomyCase::A: return "A";
    case TrichotomyCase::B: return "B";
    case TrichotomyCase::C: return "C";
    case TrichotomyCase::Unresolved: return "Unresolved";
  }
  return "?";
}

const char* to_string(ColimitBranch b) {
  switch (b) {
    case ColimitBranch::Inapplicable: return "inapplicable";
    case ColimitBranch::Equilibrium: return "equilibrium";
    case ColimitBranch::PseudoOrdered: return "pseudo_ordered";
    case ColimitBranch::Neither: return "neither";
  }
  return "?";
}

PseudoOrderWitness detect_pseudo_ordered(const TrajectorySegment& traj, const QuadraticCone& cone,
                                         double sep_tol) {
  const std::size_t m = traj.size();
  if (m < 2) throw InputError("pseudo-order scan needs at least 2 samples");
  auto test = [&](std::size_t i, std::size_t j) -> std::optional<PseudoOrderWitness> {
    const Vec d = traj.states[j] - traj.states[i];
    const double norm = d.norm();
    if (!(norm > sep_tol)) return std::nullopt;
    const ConeMembership mem = cone.membership(d);
    const bool ok = mem.cls == MembershipClass::Interior ||
                    (mem.cls == MembershipClass::Boundary && norm > 10.0 * sep_tol);
    if (!ok) return std::nullopt;
    PseudoOrderWitness w;
    w.t1 = traj.times[i];
    w.t2 = traj.times[j];
    w.difference_form = mem.normalized_form;
    w.membership = mem.cls;
    w.found = true;
    return w;
  };

  const std::size_t mc = (m - 1) / kCoarseStride + 1;
  for (std::size_t lag = 1; lag < mc; ++lag) {
    for (std::size_t a = 0; a + lag < mc; ++a) {
      const std::size_t i = a * kCoarseStride;
      const std::size_t j = (a + lag) * kCoarseStride;
      auto hit = test(i, j);
      if (!hit) continue;
      // Smallest full-resolution lag near the coarse hit.
      const std::size_t lo_lag = lag * kCoarseStride - (kCoarseStride - 1);
      for (std::size_t fl = lo_lag; fl < lag * kCoarseStride; ++fl) {
        const std::size_t s_lo = i >= kCoarseStride ? i - kCoarseStride : 0;
        for (std::size_t s = s_lo; s <= i + kCoarseStride && s + fl < m; ++s) {
          if (auto fine = test(s, s + fl)) return *fine;
        }
      }
      return *hit;
    }
  }
  // Lags below the coarse stride are invisible to the subsample.
  for (std::size_t lag = 1; lag < kCoarseStride && lag < m; ++lag) {
    for (std::size_t i = 0; i + lag < m; ++i) {
      if (auto w = test(i, i + lag)) return *w;
    }
  }
  return {};
}

OmegaCloud omega_from_trajectory(const SemiflowSystem& sys, const TrajectorySegment& traj,
                                 double transient, const IntegratorControl& control) {
  OmegaCloud cloud;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.times[i] >= transient - 1e-9) {
      cloud.times.push_back(traj.times[i]);
      cloud.points.push_back(traj.states[i]);
    }
  }
  if (cloud.points.empty()) throw InsufficientDataError("omega cloud: no samples after transient");
  const std::size_t m = cloud.points.size();

  cloud.min_rhs_norm = std::numeric_limits<double>::infinity();
  for (const Vec& p : cloud.points) cloud.min_rhs_norm = std::min(cloud.min_rhs_norm, sys.rhs(p).norm());

  // Repeated double sweep for the farthest pair.
  std::size_t anchor = 0;
  for (int sweep = 0; sweep < 4; ++sweep) {
    std::size_t far = anchor;
    double best = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = (cloud.points[i] - cloud.points[anchor]).norm();
      if (d > best) {
        best = d;
        far = i;
      }
    }
    cloud.diameter = std::max(cloud.diameter, best);
    anchor = far;
  }

  if (cloud.diameter > kMinRecurrenceDiameter && m >= 3) {
    const Vec& p0 = cloud.points[0];
    std::vector<double> g(m);
    for (std::size_t j = 0; j < m; ++j) g[j] = (cloud.points[j] - p0).norm();
    std::vector<std::size_t> minima;
    for (std::size_t j = 1; j + 1 < m; ++j) {
      if (g[j] <= g[j - 1] && g[j] < g[j + 1] && g[j] < 0.5 * cloud.diameter) minima.push_back(j);
    }
    std::sort(minima.begin(), minima.end(), [&](std::size_t a, std::size_t b) { return g[a] < g[b]; });
    if (minima.size() > kMaxRecurrenceCandidates) minima.resize(kMaxRecurrenceCandidates);
    IntegratorControl short_ctl = control;
    for (std::size_t j : minima) {
      const double t_lo = cloud.times[j - 1] - cloud.times[0];
      const double t_hi = cloud.times[j + 1] - cloud.times[0];
      const Vec& start = cloud.points[j - 1];
      auto mismatch = [&](double period) {
        const double dt = period - t_lo;
        if (dt <= 0.0) return (start - p0).norm();
        short_ctl.stride = dt;
        const TrajectorySegment seg = integrate(sys, start, dt, short_ctl);
        cloud.stats += seg.stats;
        return (seg.states.back() - p0).norm();
      };
      const optimize::ScalarOptimum best = optimize::golden_section_min(mismatch, t_lo, t_hi, 1e-11);
      cloud.recurrence_candidates.push_back({best.x, best.value});
    }
    std::sort(cloud.recurrence_candidates.begin(), cloud.recurrence_candidates.end(),
              [](const RecurrenceCandidate& a, const RecurrenceCandidate& b) {
                return a.period < b.period;
              });
  }
  return cloud;
}

OmegaCloud estimate_omega(const SemiflowSystem& sys, const Vec& x0, double transient,
                          double window, const IntegratorControl& control) {
  if (!(transient > 0.0) || !(window > 0.0)) {
    throw InputError("estimate_omega: transient and window must be positive");
  }
  const TrajectorySegment traj = integrate(sys, x0, transient + window, control);
  OmegaCloud cloud = omega_from_trajectory(sys, traj, transient, control);
  cloud.stats += traj.stats;
  return cloud;
}

Vec refine_equilibrium(const SemiflowSystem& sys, const Vec& guess, int max_iter) {
  Vec x = guess;
  Vec fx = sys.rhs(x);
  double res = fx.norm();
  for (int it = 0; it < max_iter && res > 1e-15; ++it) {
    const Mat j = sys.jacobian(x);
    const Vec step = j.colPivHouseholderQr().solve(-fx);
    if (!step.allFinite()) break;
    double damping = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 40; ++ls, damping *= 0.5) {
      const Vec trial = x + damping * step;
      const Vec ft = sys.rhs(trial);
      if (ft.norm() < res) {
        x = trial;
        fx = ft;
        res = ft.norm();
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return x;
}

OmegaClassification classify_omega(const SemiflowSystem& sys, const OmegaCloud& cloud,
                                   const ClassificationTolerances& tol,
                                   const IntegratorControl& control) {
  if (cloud.points.empty()) throw InputError("classify_omega: empty cloud");
  OmegaClassification out;
  out.cloud_size = cloud.points.size();
  out.contains_equilibrium = cloud.min_rhs_norm < tol.eq_rhs_tol;

  if (cloud.diameter < tol.eq_diam_tol && cloud.min_rhs_norm < tol.eq_rhs_tol) {
    Vec centroid = Vec::Zero(cloud.points[0].size());
    for (const Vec& p : cloud.points) centroid += p;
    centroid /= static_cast<double>(cloud.points.size());
    out.equilibrium = refine_equilibrium(sys, centroid);
    out.equilibrium_residual = sys.rhs(out.equilibrium).norm();
    out.equilibrium_test = true;
  }

  if (cloud.diameter > 10.0 * tol.eq_diam_tol) {
    const Vec& p0 = cloud.points[0];
    for (const RecurrenceCandidate& c : cloud.recurrence_candidates) {
      if (c.period < tol.t_min || !(c.mismatch < tol.per_tol)) continue;
      // Validate along a full resampled period, not only at the return time.
      IntegratorControl ctl = control;
      ctl.stride = c.period / 64.0;
      const TrajectorySegment seg = integrate(sys, p0, 2.0 * c.period, ctl);
      if (seg.size() < 129) continue;
      double worst = 0.0;
      for (std::size_t i = 0; i <= 64; ++i) {
        worst = std::max(worst, (seg.states[i + 64] - seg.states[i]).norm());
      }
      if (worst < tol.per_tol) {
        out.periodic_test = true;
        out.period = c.period;
        out.period_mismatch = worst;
        break;
      }
    }
  }

  if (out.equilibrium_test && out.periodic_test) {
    out.cls = OmegaClass::Unresolved;
  } else if (out.equilibrium_test) {
    out.cls = OmegaClass::Equilibrium;
  } else if (out.periodic_test) {
    out.cls = OmegaClass::PeriodicOrbit;
  } else {
    out.cls = OmegaClass::Other;
  }
  return out;
}

std::vector<Vec> farthest_point_subsample(const std::vector<Vec>& points, int count) {
  std::vector<Vec> out;
  if (points.empty() || count < 1) return out;
  out.push_back(points[0]);
  std::vector<double> dist(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) dist[i] = (points[i] - points[0]).norm();
  while (static_cast<int>(out.size()) < count) {
    const auto it = std::max_element(dist.begin(), dist.end());
    if (*it < 1e-12) break;
    const Vec& p = points[static_cast<std::size_t>(it - dist.begin())];
    out.push_back(p);
    for (std::size_t i = 0; i < points.size(); ++i) dist[i] = std::min(dist[i], (points[i] - p).norm());
  }
  return out;
}

TrichotomyReport trichotomy_case(const SemiflowSystem& sys, const OmegaCloud& cloud,
                                 const QuadraticCone& cone, const TrichotomyOptions& opts,
                                 const ClassificationTolerances& tol) {
  if (cloud.points.empty()) throw InputError("trichotomy: empty cloud");
  if (opts.spectrum_budget < 1) throw InputError("trichotomy: spectrum budget must be positive");
  TrichotomyReport rep;
  const int k = cone.rank();
  const std::vector<Vec> reps = farthest_point_subsample(cloud.points, opts.spectrum_budget);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    TrichotomyPoint tp;
    tp.point = reps[i];
    try {
      LyapunovOptions lo;
      lo.k_plus = k;
      lo.k = k;
      lo.horizon = opts.horizon;
      lo.window = opts.window;
      lo.control = opts.control;
      lo.seed = stream_seed(opts.seed, i);
      const LyapunovEstimate est = lyapunov_spectrum(sys, reps[i], lo);
      tp.ok = true;
      tp.lambda_k = est.k_exponent;
      tp.regular_like = est.regular_like;
      rep.stats += est.stats;
    } catch (const Error& e) {
      tp.error = e.what();
    }
    rep.points.push_back(tp);
  }

  bool any_ok = false;
  bool all_above = true;
  bool regular_below = false;
  bool regular_above = false;
  bool irregular_below = false;
  rep.lambda_k = std::numeric_limits<double>::infinity();
  for (const auto& tp : rep.points) {
    if (!tp.ok) continue;
    any_ok = true;
    rep.lambda_k = std::min(rep.lambda_k, tp.lambda_k);
    const bool above = tp.lambda_k > tol.trich_tol;
    all_above = all_above && above;
    if (tp.regular_like) {
      (above ? regular_above : regular_below) = true;
    } else if (!above) {
      irregular_below = true;
    }
  }
  if (!any_ok) {
    rep.lambda_k = 0.0;
    rep.result = TrichotomyCase::Unresolved;
  } else if (all_above) {
    rep.result = TrichotomyCase::A;
  } else if (regular_below) {
    rep.result = TrichotomyCase::C;
  } else if (regular_above && irregular_below) {
    rep.result = TrichotomyCase::B;
  } else {
    rep.result = TrichotomyCase::Unresolved;
  }
  return rep;
}

InstabilityReport instability_check(const SemiflowSystem& sys, const QuadraticCone& cone,
                                    const Vec& x0, const InstabilityOptions& opts,
                                    const ClassificationTolerances& tol) {
  const int n = sys.dim();
  if (x0.size() != n || cone.dim() != n) throw InputError("instability check: dimension mismatch");
  if (opts.n_perturbations < 1 || opts.sizes.empty() || !(opts.horizon > 0.0)) {
    throw InputError("instability check: need perturbations, sizes and a positive horizon");
  }
  const std::vector<double> grid = uniform_grid(opts.horizon, opts.control.stride);
  const int k = cone.rank();
  InstabilityReport rep;
  rep.delta_lower_bound = std::numeric_limits<double>::infinity();
  rep.positive = true;
  std::uint64_t draw = 0;
  for (double size : opts.sizes) {
    double size_min = std::numeric_limits<double>::infinity();
    for (int p = 0; p < opts.n_perturbations; ++p) {
      Rng rng(stream_seed(opts.seed, draw++));
      const Vec a = rng.normal_vector(k);
      const Vec b = rng.normal_vector(n - k);
      const Vec d = cone.cone_direction(a, b, rng.uniform(0.0, 0.5));
      double sep = 0.0;
      try {
        const PairTrajectory pt = integrate_pair(sys, x0, x0 + size * d, grid, opts.control);
        for (const Vec& diff : pt.difference) sep = std::max(sep, diff.norm());
      } catch (const DivergenceError&) {
        sep = std::numeric_limits<double>::infinity();
      }
      size_min = std::min(size_min, sep);
      ++rep.perturbations;
    }
    rep.per_size_min.push_back(size_min);
    rep.delta_lower_bound = std::min(rep.delta_lower_bound, size_min);
    if (!(size_min > tol.inst_tol)) rep.positive = false;
  }
  return rep;
}

DichotomyReport local_dichotomy_check(const SemiflowSystem& sys, const QuadraticCone& cone,
                                      const Vec& x0, const DichotomyOptions& opts,
                                      const ClassificationTolerances& tol) {
  const int n = sys.dim();
  if (x0.size() != n || cone.dim() != n) throw InputError("dichotomy check: dimension mismatch");
  if (opts.n_neighbors < 1 || !(opts.radius > 0.0) || !(opts.horizon > 0.0)) {
    throw InputError("dichotomy check: need neighbors, radius and horizon");
  }
  const std::vector<double> grid = uniform_grid(opts.horizon, opts.control.stride);
  DichotomyReport rep;
  for (int i = 0; i < opts.n_neighbors; ++i) {
    Rng rng(stream_seed(opts.seed, static_cast<std::uint64_t>(i)));
    const Vec y = rng.in_ball(x0, opts.radius);
    ++rep.neighbors;
    PairTrajectory pt;
    try {
      pt = integrate_pair(sys, x0, y, grid, opts.control);
    } catch (const Error&) {
      ++rep.undecided;
      continue;
    }
    const std::size_t m = pt.difference.size();
    std::vector<double> norms(m);
    for (std::size_t j = 0; j < m; ++j) norms[j] = pt.difference[j].norm();

    bool decays = norms.back() < tol.dich_tol;
    for (std::size_t j = m / 2 + 1; decays && j < m; ++j) {
      if (norms[j] > norms[j - 1] * (1.0 + 1e-6) + 1e-300) decays = false;
    }
    if (decays) {
      ++rep.converged;
      continue;
    }
    // Final run of Interior memberships on the grid.
    std::size_t run = 0;
    for (std::size_t j = m; j-- > 0;) {
      if (cone.membership(pt.difference[j]).cls != MembershipClass::Interior) break;
      ++run;
    }
    if (run >= 2) {
      ++rep.ordered;
    } else {
      ++rep.undecided;
    }
  }
  rep.fraction = static_cast<double>(rep.converged + rep.ordered) / static_cast<double>(rep.neighbors);
  rep.positive = rep.undecided == 0;
  return rep;
}

ColimitReport colimit_check(const SemiflowSystem& sys, const QuadraticCone& cone, const Vec& x,
                            const Vec& y, const std::vector<double>& t_sequence,
                            const ClassificationTolerances& tol,
                            const IntegratorControl& control) {
  if (x.size() != sys.dim() || y.size() != sys.dim()) throw InputError("colimit: dimension mismatch");
  const Vec d0 = y - x;
  if (d0.norm() == 0.0 || cone.membership(d0).cls == MembershipClass::Outside) {
    throw InputError("colimit: x and y must be distinct and ordered");
  }
  if (t_sequence.size() < 2) throw InputError("colimit: need at least two times");
  const PairTrajectory pt = integrate_pair(sys, x, y, t_sequence, control);
  ColimitReport rep;
  rep.final_gap = pt.difference.back().norm();
  rep.z = pt.base.back();
  for (std::size_t j = pt.base.size() / 2; j < pt.base.size(); ++j) {
    rep.cluster_radius = std::max(rep.cluster_radius, (pt.base[j] - rep.z).norm());
  }
  if (!(rep.final_gap < tol.colim_tol) || !(rep.cluster_radius < tol.colim_tol)) {
    rep.branch = ColimitBranch::Inapplicable;
    return rep;
  }
  if (sys.rhs(rep.z).norm() < tol.eq_rhs_tol) {
    rep.branch = ColimitBranch::Equilibrium;
    return rep;
  }
  const TrajectorySegment traj = integrate(sys, rep.z, kColimitWindow, control);
  rep.branch = detect_pseudo_ordered(traj, cone, tol.sep_tol).found ? ColimitBranch::PseudoOrdered
                                                                     : ColimitBranch::Neither;
  return rep;
}

OrbitReport classify_orbit(const SemiflowSystem& sys, const QuadraticCone& cone, const Vec& x0,
                           const OrbitOptions& opts, const ClassificationTolerances& tol) {
  if (!(opts.transient > 0.0) || !(opts.window > 0.0)) {
    throw InputError("orbit: transient and window must be positive");
  }
  OrbitReport rep;
  rep.x0 = x0;
  try {
    const TrajectorySegment traj = integrate(sys, x0, opts.transient + opts.window, opts.control);
    rep.stats += traj.stats;
    rep.pseudo_ordered = detect_pseudo_ordered(traj, cone, tol.sep_tol);
    rep.cloud = omega_from_trajectory(sys, traj, opts.transient, opts.control);
    rep.stats += rep.cloud.stats;
    rep.omega = classify_omega(sys, rep.cloud, tol, opts.control);
    if (opts.run_trichotomy) {
      rep.trichotomy = trichotomy_case(sys, rep.cloud, cone, opts.trichotomy, tol);
      rep.stats += rep.trichotomy.stats;
    }
  } catch (const DivergenceError& e) {
    rep.bounded = false;
    rep.failure = e.what();
    return rep;
  } catch (const Error& e) {
    rep.failure = e.what();
    rep.omega.cls = OmegaClass::Unresolved;
    return rep;
  }
  rep.in_q = rep.pseudo_ordered.found;
  rep.in_ce = rep.omega.cls == OmegaClass::Equilibrium;
  rep.in_qe = rep.in_q || rep.in_ce;
  return rep;
}

}  // namespace conedyn
