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

#include "conedyn/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "conedyn/errors.hpp"
#include "conedyn/sampling.hpp"

namespace conedyn {

namespace {

constexpr double kCollapse = 1e-300;

ThinQr push_frame(const Mat& factor, const Mat& frame) {
  ThinQr qr = thin_qr_positive(factor * frame);
  for (Eigen::Index j = 0; j < qr.r.cols(); ++j) {
    if (!(qr.r(j, j) > kCollapse)) {
      throw SplittingDegenerateError("pushed frame collapsed (rank loss)");
    }
  }
  return qr;
}

}  // namespace

std::vector<SplittingFrame> evolve_frames(const TrajectorySegment& traj, int k, const Mat& e_seed) {
  if (!traj.has_factors() || traj.factors.size() != traj.size()) {
    throw InputError("evolve_frames: trajectory has no fundamental factors");
  }
  const Eigen::Index n = traj.states.front().size();
  if (k < 1 || k >= n) throw InputError("evolve_frames: need 1 <= k < n");
  if (e_seed.rows() != n || e_seed.cols() != k) throw InputError("evolve_frames: seed must be n x k");
  const std::size_t m = traj.size();

  std::vector<SplittingFrame> frames(m);
  Mat e = orthonormalize(e_seed);
  for (std::size_t j = 0; j < m; ++j) {
    if (j > 0) e = push_frame(traj.factors[j], e).q;
    frames[j].time = traj.times[j];
    frames[j].base_point = traj.states[j];
    frames[j].e_basis = e;
  }

  // Dominant k-subspace of the transposed cocycle, iterated backwards; its
  // orthogonal complement is the invariant complement F.
  Mat w = orthonormalize(e_seed);
  std::vector<Mat> adj(m);
  adj[m - 1] = w;
  for (std::size_t j = m - 1; j > 0; --j) {
    w = push_frame(traj.factors[j].transpose(), w).q;
    adj[j - 1] = w;
  }
  for (std::size_t j = 0; j < m; ++j) {
    auto& fr = frames[j];
    fr.f_basis = orthogonal_complement(adj[j]);
    const Mat coupling = adj[j].transpose() * fr.e_basis;
    Eigen::FullPivLU<Mat> lu(coupling);
    if (!lu.isInvertible()) throw SplittingDegenerateError("E and F are not complementary");
    fr.p = fr.e_basis * lu.solve(adj[j].transpose());
    fr.q = Mat::Identity(n, n) - fr.p;
  }
  return frames;
}

double infimum_norm(const Mat& map_factor, const Mat& frame) {
  return smallest_singular_value(map_factor * frame);
}

double gap_distance(const Mat& l1, const Mat& l2) {
  if (l1.rows() != l2.rows() || l1.cols() != l2.cols() || l1.cols() == 0) {
    throw InputError("gap_distance: subspaces must have equal dimension");
  }
  return 2.0 * std::sin(0.5 * largest_principal_angle(l1, l2));
}

LyapunovEstimate lyapunov_spectrum(const SemiflowSystem& sys, const Vec& x0,
                                   const LyapunovOptions& opts) {
  const int n = sys.dim();
  const int kp = opts.k_plus > 0 ? opts.k_plus : n;
  const int k = opts.k > 0 ? opts.k : std::max(1, kp - 1);
  if (kp > n) throw InputError("lyapunov: k_plus exceeds the dimension");
  if (k > kp) throw InputError("lyapunov: k exceeds k_plus");
  if (!(opts.window > 0.0) || !(opts.horizon >= 10.0 * opts.window)) {
    throw InputError("lyapunov: need window > 0 and horizon >= 10 window");
  }

  const TrajectorySegment traj =
      integrate_with_variational(sys, x0, opts.horizon, opts.control, opts.window);

  Rng rng(opts.seed);
  Mat frame(n, kp);
  for (int j = 0; j < kp; ++j) frame.col(j) = rng.normal_vector(n);
  frame = orthonormalize(frame);

  const double burn = opts.burn_in_fraction * opts.horizon;
  std::vector<double> sums(static_cast<std::size_t>(kp), 0.0);
  double inf_sum = 0.0;
  double elapsed = 0.0;
  LyapunovEstimate est;
  est.horizon = opts.horizon;
  est.k = k;
  for (std::size_t j = 1; j < traj.size(); ++j) {
    const ThinQr qr = push_frame(traj.factors[j], frame);
    const double dt = traj.times[j] - traj.times[j - 1];
    if (traj.times[j - 1] >= burn - 1e-12) {
      for (int i = 0; i < kp; ++i) sums[static_cast<std::size_t>(i)] += std::log(qr.r(i, i));
      inf_sum += std::log(smallest_singular_value(qr.r.topLeftCorner(k, k)));
      elapsed += dt;
      std::vector<double> running(sums.size());
      for (std::size_t i = 0; i < sums.size(); ++i) running[i] = sums[i] / elapsed;
      std::sort(running.begin(), running.end(), std::greater<>());
      est.window_series.push_back(std::move(running));
      est.window_times.push_back(traj.times[j]);
    }
    frame = qr.q;
  }
  if (!(elapsed > 0.0)) throw InsufficientDataError("lyapunov: no windows after burn-in");

  est.exponents.resize(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) est.exponents[i] = sums[i] / elapsed;
  std::sort(est.exponents.begin(), est.exponents.end(), std::greater<>());
  est.k_exponent = est.exponents[static_cast<std::size_t>(k - 1)];
  est.k_exponent_infimum = inf_sum / elapsed;

  const std::size_t total = est.window_series.size();
  const std::size_t start = total - std::max<std::size_t>(1, total / 4);
  double mean = 0.0;
  for (std::size_t i = start; i < total; ++i) mean += est.window_series[i][static_cast<std::size_t>(k - 1)];
  mean /= static_cast<double>(total - start);
  double var = 0.0;
  for (std::size_t i = start; i < total; ++i) {
    const double d = est.window_series[i][static_cast<std::size_t>(k - 1)] - mean;
    var += d * d;
  }
  est.k_dispersion = std::sqrt(var / static_cast<double>(total - start));
  est.regular_like = est.k_dispersion < opts.reg_tol;
  est.stats = traj.stats;
  return est;
}

SeparationDiagnostics separation_diagnostics(const std::vector<SplittingFrame>& frames,
                                             const TrajectorySegment& traj) {
  if (frames.size() < 8) throw InsufficientDataError("separation diagnostics need at least 8 grid points");
  if (!traj.has_factors() || traj.size() != frames.size()) {
    throw InputError("separation diagnostics: frames and trajectory grid differ");
  }
  const std::size_t m = frames.size();
  Mat ye = frames[0].e_basis;
  Mat yf = frames[0].f_basis;
  Mat te = Mat::Identity(ye.cols(), ye.cols());
  Mat tf = Mat::Identity(yf.cols(), yf.cols());
  double log_e = 0.0;
  double log_f = 0.0;
  std::vector<double> log_ratio(m, 0.0);
  SeparationDiagnostics out;
  out.times.resize(m);
  out.ratio_series.resize(m);
  const double t0 = frames[0].time;
  for (std::size_t j = 0; j < m; ++j) {
    if (j > 0) {
      // Accumulate triangular factors with a separate log scale so the
      // product never overflows.
      ThinQr qe = push_frame(traj.factors[j], ye);
      // Projecting along E keeps rounding errors from leaking into the
      // dominant directions once |DPhi w| falls below machine precision.
      ThinQr qf = push_frame(frames[j].q * traj.factors[j], yf);
      ye = qe.q;
      yf = qf.q;
      te = (qe.r * te).eval();
      tf = (qf.r * tf).eval();
      const double se = te.cwiseAbs().maxCoeff();
      const double sf = tf.cwiseAbs().maxCoeff();
      te /= se;
      tf /= sf;
      log_e += std::log(se);
      log_f += std::log(sf);
    }
    const double lmin_e = log_e + std::log(smallest_singular_value(te));
    const double lmax_f = log_f + std::log(largest_singular_value(tf));
    log_ratio[j] = lmax_f - lmin_e;
    out.times[j] = frames[j].time - t0;
    out.ratio_series[j] = std::exp(log_ratio[j]);
  }

  const std::size_t start = m / 2;
  const double cnt = static_cast<double>(m - start);
  double st = 0.0;
  double sl = 0.0;
  for (std::size_t j = start; j < m; ++j) {
    st += out.times[j];
    sl += log_ratio[j];
  }
  const double mt = st / cnt;
  const double ml = sl / cnt;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t j = start; j < m; ++j) {
    sxx += (out.times[j] - mt) * (out.times[j] - mt);
    sxy += (out.times[j] - mt) * (log_ratio[j] - ml);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double intercept = ml - slope * mt;
  out.gamma_hat = std::exp(slope);
  out.m_hat = std::exp(intercept);
  double worst = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double excess = log_ratio[j] - (intercept + slope * out.times[j]);
    worst = std::max(worst, std::expm1(std::min(700.0, excess)));
  }
  out.fit_residual = worst;
  out.separated = out.gamma_hat < 1.0 - 1e-3;
  return out;
}

std::vector<Vec> unit_mesh(const Mat& frame, int count, std::uint64_t seed) {
  const Eigen::Index k = frame.cols();
  std::vector<Vec> mesh;
  if (k == 1) {
    mesh.push_back(frame.col(0).normalized());
    return mesh;
  }
  mesh.reserve(static_cast<std::size_t>(count));
  if (k == 2) {
    // Antipodal symmetry: a half circle covers every line.
    for (int i = 0; i < count; ++i) {
      const double th = std::numbers::pi * i / count;
      mesh.push_back(frame * Eigen::Vector2d(std::cos(th), std::sin(th)));
    }
  } else if (k == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      mesh.push_back(frame * Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z));
    }
  } else {
    Rng rng(seed);
    for (int i = 0; i < count; ++i) mesh.push_back(frame * rng.unit_vector(k));
  }
  for (auto& v : mesh) v.normalize();
  return mesh;
}

ConeMarginsReport cone_margins(const std::vector<SplittingFrame>& frames, const QuadraticCone& cone,
                               int sample_budget, std::uint64_t seed) {
  if (frames.empty()) throw InputError("cone_margins: no frames");
  const Eigen::Index n = cone.dim();
  if (frames.front().e_basis.rows() != n) throw InputError("cone_margins: cone dimension mismatch");
  if (sample_budget < 1) throw InputError("cone_margins: sample budget must be positive");

  ConeMarginsReport rep;
  rep.delta_prime = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  std::vector<double> ratio;
  std::vector<char> interior;
  ratio.reserve(frames.size() * static_cast<std::size_t>(sample_budget));
  interior.reserve(ratio.capacity());
  for (const auto& fr : frames) {
    const bool e_ok = cone.subspace_in_cone(fr.e_basis) == SubspacePlacement::InsideInterior;
    const bool f_ok = cone.meets_only_at_origin(fr.f_basis);
    if (!e_ok || !f_ok) {
      rep.compatible = false;
      ++rep.incompatible_frames;
    }
    for (const Vec& v : unit_mesh(fr.e_basis)) {
      rep.delta_prime = std::min(rep.delta_prime, cone.distance_to_complement(v));
    }
    rep.max_projection_norm = std::max(rep.max_projection_norm, largest_singular_value(fr.p));
    for (int s = 0; s < sample_budget; ++s) {
      const Vec v = rng.unit_vector(n);
      const double qn = (fr.q * v).norm();
      const double pn = (fr.p * v).norm();
      ratio.push_back(qn > 0.0 ? pn / qn : std::numeric_limits<double>::infinity());
      interior.push_back(cone.membership(v).cls == MembershipClass::Interior ? 1 : 0);
    }
  }
  rep.samples = static_cast<std::int64_t>(ratio.size());

  auto violations = [&](double c1) {
    std::int64_t count = 0;
    for (std::size_t i = 0; i < ratio.size(); ++i) {
      if (!interior[i] && ratio[i] >= c1) ++count;
    }
    return count;
  };
  double lo = 1e-12;
  double hi = 1e12;
  if (violations(hi) > 0) {
    rep.c1 = std::numeric_limits<double>::infinity();
  } else if (violations(lo) == 0) {
    rep.c1 = lo;
  } else {
    for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-13; ++it) {
      const double mid = std::sqrt(lo * hi);
      (violations(mid) == 0 ? hi : lo) = mid;
    }
    rep.c1 = hi;
  }
  return rep;
}

}  // namespace conedyn
