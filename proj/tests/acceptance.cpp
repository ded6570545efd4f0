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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"

#include "conedyn/classification.hpp"
#include "conedyn/config.hpp"
#include "conedyn/errors.hpp"
#include "conedyn/harness.hpp"
#include "conedyn/monotonicity.hpp"
#include "conedyn/splitting.hpp"

using namespace conedyn;

namespace {

const std::string kConfigs = std::string(CONEDYN_SOURCE_DIR) + "/configs/";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Mat diag(std::initializer_list<double> d) {
  Vec v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

Mat random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.householderQ() * Mat::Identity(n, n);
}

ExperimentConfig config(const char* name) { return load_config(kConfigs + name); }

Outcome cone_distance_oracle() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  std::normal_distribution<double> g;
  double worst = 0.0;
  int vectors = 0;
  double lib_seconds = 0.0;
  for (int c = 0; c < 10; ++c) {
    const int n = 2 + c % 5;
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
    Vec d(n);
    for (int i = 0; i < n; ++i) d(i) = (i < k ? 1.0 : -1.0) * u(rng);
    const Mat o = random_orthogonal(n, rng);
    Mat q = o * d.asDiagonal() * o.transpose();
    q = 0.5 * (q + q.transpose());
    const QuadraticCone cone(q, k);
    for (int j = 0; j < 10; ++j) {
      Vec v(n);
      do {
        for (int i = 0; i < n; ++i) v(i) = g(rng);
        v.normalize();
      } while (v.dot(q * v) < 1e-2);
      const auto t0 = std::chrono::steady_clock::now();
      const double lib = cone.distance_to_complement(v);
      lib_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const double ref = oracle::distance_to_complement(q, v, 20000, 17 + static_cast<std::uint64_t>(vectors));
      worst = std::max(worst, std::abs(lib - ref));
      ++vectors;
    }
  }
  return {worst < 1e-4 && vectors == 100 && lib_seconds < 30.0,
          "vectors=" + std::to_string(vectors) + fmt(" max_abs_err=%.3g", worst) +
              fmt(" library_s=%.3f", lib_seconds)};
}

Outcome separation_index_closed_form() {
  const QuadraticCone cone(diag({1, -1, -1}), 1);
  const double kappa = cone.separation_index(diag({1, 0.5, 0.5})).kappa;
  const double expect = 1.0 / std::sqrt(10.0);
  return {std::abs(kappa - expect) <= 2e-3, fmt("kappa=%.10f", kappa) + fmt(" expected=%.10f", expect)};
}

Outcome lyapunov_linear() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const int n = 2 + s % 5;
    // Real eigenvalues plus one rotation block when n >= 4.
    Mat block = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) block(i, i) = u(rng);
    if (n >= 4) {
      block(1, 1) = block(0, 0);
      block(0, 1) = -1.5;
      block(1, 0) = 1.5;
    }
    Mat sm = Mat::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sm(i, j) += 0.3 * u(rng);
    const Mat a = sm * block * sm.inverse();
    LyapunovOptions lo;
    lo.horizon = 200.0;
    const LyapunovEstimate est = lyapunov_spectrum(linear_system(a), Vec::Zero(n), lo);
    const std::vector<double> ref = oracle::eigen_real_parts(a);
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(est.exponents[static_cast<std::size_t>(i)] - ref[static_cast<std::size_t>(i)]));
    }
  }
  return {worst < 1e-2, "systems=20" + fmt(" max_abs_err=%.3g", worst)};
}

Outcome splitting_constants() {
  const Mat a = diag({2, 1, -1});
  const QuadraticCone cone(diag({1, 1, -1}), 2);
  IntegratorControl ctl;
  ctl.stride = 0.1;
  const TrajectorySegment traj = integrate_with_variational(linear_system(a), Vec::Zero(3), 10.0, ctl, 0.1);
  const std::vector<SplittingFrame> frames = evolve_frames(traj, 2, cone.positive_eigenspace());
  const SeparationDiagnostics sd = separation_diagnostics(frames, traj);
  const ConeMarginsReport cm = cone_margins(frames, cone, 1000);
  const double g = std::exp(-2.0);
  const double dp = std::sqrt(0.5);
  return {std::abs(sd.gamma_hat - g) <= 1e-3 && std::abs(cm.delta_prime - dp) <= 1e-3,
          fmt("gamma_hat=%.8f", sd.gamma_hat) + fmt(" expected=%.8f", g) +
              fmt(" delta_prime=%.8f", cm.delta_prime) + fmt(" expected=%.8f", dp)};
}

Outcome frame_invariance() {
  struct Case {
    const char* config;
    Vec start;
  };
  std::vector<Case> cases{{"hopf3d.json", Vec::Zero(3)},
                          {"rot_contract.json", Vec::Zero(3)},
                          {"grad_well.json", Vec::Zero(3)},
                          {"feedback3.json", Vec::Zero(3)}};
  cases[0].start << 0.1, 0.0, 0.5;
  cases[1].start << 1.0, 0.5, -0.5;
  cases[2].start << 0.3, 0.2, 0.1;
  cases[3].start << 0.5, 0.0, 0.0;
  std::string detail;
  bool pass = true;
  int tested = 0;
  for (const Case& c : cases) {
    const ExperimentConfig cfg = config(c.config);
    const SemiflowSystem sys = cfg.build();
    const QuadraticCone cone = cfg.cone();
    const int k = cone.rank();
    // Settle onto the attractor, except for the linear contraction whose
    // attractor is the origin.
    const bool settle = cfg.system.name != "rot_contract";
    const Vec x0 = settle ? flow_map(sys, c.start, 40.0, cfg.control) : c.start;
    LyapunovOptions lo;
    lo.horizon = 100.0;
    lo.control = cfg.control;
    const LyapunovEstimate est = lyapunov_spectrum(sys, x0, lo);
    const double gap = est.exponents[static_cast<std::size_t>(k - 1)] - est.exponents[static_cast<std::size_t>(k)];
    detail += std::string(c.config) + fmt(":gap=%.3f", gap);
    if (gap < 0.5) {
      detail += "(skipped) ";
      continue;
    }
    ++tested;
    const double horizon = 60.0;
    const double burn_in = 30.0;
    const TrajectorySegment traj = integrate_with_variational(sys, x0, horizon, cfg.control, 0.1);
    const std::vector<SplittingFrame> fa = evolve_frames(traj, k, cone.positive_eigenspace());
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    Mat seed(sys.dim(), k);
    for (Eigen::Index i = 0; i < seed.size(); ++i) seed.data()[i] = g(rng);
    const std::vector<SplittingFrame> fb = evolve_frames(traj, k, seed);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < fa.size(); ++i) {
      if (fa[i].time < burn_in) continue;
      worst = std::max(worst, gap_distance(fa[i].e_basis, fb[i].e_basis));
      if (i % 10 != 0) continue;
      // Push forward with an independent integration of the derivative.
      const Mat m = flow_derivative(sys, fa[i].base_point, fa[i + 1].time - fa[i].time, cfg.control);
      const Eigen::HouseholderQR<Mat> qr(m * fa[i].e_basis);
      const Mat pushed = qr.householderQ() * Mat::Identity(sys.dim(), k);
      worst = std::max(worst, gap_distance(pushed, fa[i + 1].e_basis));
    }
    detail += fmt(",max_gap=%.3g ", worst);
    pass = pass && worst < 1e-6;
  }
  detail += "systems_tested=" + std::to_string(tested);
  return {pass && tested > 0, detail};
}

Outcome strong_monotonicity() {
  MonotoneCheckOptions opts;
  opts.n_pairs = 500;
  std::string detail;
  bool pass = true;
  {
    const QuadraticCone cone(diag({1, 1, -1}), 2);
    const Box box{Vec::Constant(3, -1.0), Vec::Constant(3, 1.0)};
    const MonotoneVerdict v = check_monotone_pairs(linear_system(diag({2, 1, -1})), cone, box, opts);
    detail += "linear=" + std::to_string(v.monotone_violations + v.strong_violations);
    pass = pass && v.positive() && v.pairs_tested == 500;
  }
  for (const char* name : {"hopf3d.json", "feedback3.json"}) {
    const ExperimentConfig cfg = config(name);
    opts.control = cfg.control;
    const MonotoneVerdict v = check_monotone_pairs(cfg.build(), cfg.cone(), cfg.domain, opts);
    detail += std::string(" ") + cfg.system.name + "=" +
              std::to_string(v.monotone_violations + v.strong_violations) + "/" +
              std::to_string(v.pairs_tested);
    pass = pass && v.positive() && v.pairs_tested == 500;
  }
  const ExperimentConfig rot = config("rotation_control.json");
  opts.control = rot.control;
  const MonotoneVerdict rv = check_monotone_pairs(rot.build(), rot.cone(), rot.domain, opts);
  detail += " rotation_control=" + std::to_string(rv.monotone_violations);
  pass = pass && rv.monotone_violations > 0;
  return {pass, detail};
}

Outcome mean_value_identity() {
  const std::vector<const char*> names{"hopf3d.json", "rot_contract.json", "grad_well.json",
                                       "feedback3.json", "linear_source.json"};
  // Pairs span the whole domain, so the verdict uses 32 nodes; the count at
  // the 8-node default is reported alongside.
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int failures = 0;
  int failures_8 = 0;
  for (int d = 0; d < 200; ++d) {
    const ExperimentConfig cfg = config(names[static_cast<std::size_t>(d) % names.size()]);
    const SemiflowSystem sys = cfg.build();
    Vec x(sys.dim());
    Vec y(sys.dim());
    for (int i = 0; i < sys.dim(); ++i) {
      x(i) = cfg.domain.lower(i) + u(rng) * (cfg.domain.upper(i) - cfg.domain.lower(i));
      y(i) = cfg.domain.lower(i) + u(rng) * (cfg.domain.upper(i) - cfg.domain.lower(i));
    }
    const double horizon = 0.5 + 1.5 * u(rng);
    try {
      const AveragedJacobian aj = averaged_jacobian(sys, x, y, horizon, 32, cfg.control);
      worst = std::max(worst, aj.residual);
      if (!(aj.residual < 1e-6)) ++failures;
    } catch (const Error&) {
      ++failures;
    }
    try {
      if (!(averaged_jacobian(sys, x, y, horizon, 8, cfg.control).residual < 1e-6)) ++failures_8;
    } catch (const Error&) {
      ++failures_8;
    }
  }
  return {failures == 0, "draws=200 nodes=32 failures=" + std::to_string(failures) +
                             fmt(" max_residual=%.3g", worst) +
                             " failures_at_8_nodes=" + std::to_string(failures_8)};
}

ExperimentReport g_hopf_pb_serial;

Outcome periodic_instance() {
  const ExperimentConfig cfg = config("hopf3d.json");
  const auto t0 = std::chrono::steady_clock::now();
  g_hopf_pb_serial = run_pb_experiment(cfg, 1);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const ExperimentReport& rep = g_hopf_pb_serial;
  std::int64_t sub = 0;
  std::int64_t bad = 0;
  for (const OrbitReport& r : rep.per_sample) {
    if (!r.bounded || !r.pseudo_ordered.found || r.omega.contains_equilibrium) continue;
    ++sub;
    if (r.omega.cls != OmegaClass::PeriodicOrbit || std::abs(r.omega.period - 2 * M_PI) > 1e-3) ++bad;
  }
  return {rep.per_sample.size() == 500 && sub > 0 && bad == 0 && rep.pb.counterexamples.empty() &&
              secs < 600.0,
          "samples=" + std::to_string(rep.per_sample.size()) + " subpopulation=" + std::to_string(sub) +
              " counterexamples=" + std::to_string(bad) + fmt(" period_min=%.9f", rep.pb.period_min) +
              fmt(" period_max=%.9f", rep.pb.period_max) + fmt(" wall_s=%.1f", secs)};
}

Outcome qe_fractions() {
  const ExperimentConfig hopf = config("hopf3d.json");
  const ExperimentReport h = run_generic_experiment(hopf, 0);
  const ExperimentConfig gw = config("grad_well.json");
  const ExperimentReport w = run_generic_experiment(gw, 0);
  const bool pass = h.per_sample.size() == 500 && w.per_sample.size() == 200 && h.fraction_qe >= 0.99 &&
                    w.fraction_qe == 1.0 && h.fraction_unresolved <= 0.01 && w.fraction_unresolved <= 0.01;
  return {pass, fmt("hopf3d_QE=%.4f", h.fraction_qe) + fmt(" hopf3d_unresolved=%.4f", h.fraction_unresolved) +
                    fmt(" grad_well_QE=%.4f", w.fraction_qe) +
                    fmt(" grad_well_unresolved=%.4f", w.fraction_unresolved)};
}

Outcome local_checks() {
  const QuadraticCone c2(diag({1, 1, -1}), 2);
  const InstabilityReport inst = instability_check(linear_system(diag({2, 1, -1})), c2, Vec::Zero(3));
  DichotomyOptions opts;
  opts.n_neighbors = 100;
  const DichotomyReport contraction =
      local_dichotomy_check(linear_system(-Mat::Identity(3, 3)), c2, Vec::Zero(3), opts);
  const ExperimentConfig hopf = config("hopf3d.json");
  opts.control = hopf.control;
  double hopf_min = 1.0;
  for (double theta : {0.0, 2.0, 4.0}) {
    Vec x0(3);
    x0 << std::cos(theta), std::sin(theta), 0.0;
    hopf_min = std::min(hopf_min, local_dichotomy_check(hopf.build(), hopf.cone(), x0, opts).fraction);
  }
  return {inst.positive && contraction.fraction == 1.0 && hopf_min == 1.0,
          std::string("instability=") + (inst.positive ? "positive" : "negative") +
              fmt(" delta=%.3g", inst.delta_lower_bound) + fmt(" contraction_fraction=%.3f", contraction.fraction) +
              fmt(" hopf3d_min_fraction=%.3f", hopf_min)};
}

Outcome reproducibility() {
  const ExperimentConfig gw = config("grad_well.json");
  const std::string a = report_json(run_generic_experiment(gw, 1), gw);
  const std::string b = report_json(run_generic_experiment(gw, 1), gw);
  const std::string c = report_json(run_generic_experiment(gw, 4), gw);
  const ExperimentConfig hopf = config("hopf3d.json");
  const std::string hs = report_json(g_hopf_pb_serial, hopf);
  const std::string hp = report_json(run_pb_experiment(hopf, 4), hopf);
  const bool pass = a == b && a == c && hs == hp && report_csv(g_hopf_pb_serial).size() > 0;
  return {pass, std::string("grad_well_repeat=") + (a == b ? "identical" : "differs") +
                    " grad_well_parallel=" + (a == c ? "identical" : "differs") +
                    " hopf3d_parallel=" + (hs == hp ? "identical" : "differs") +
                    " bytes=" + std::to_string(hs.size())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"cone distance matches sampling oracle", cone_distance_oracle},
      {"separation index closed form", separation_index_closed_form},
      {"lyapunov spectrum of linear systems", lyapunov_linear},
      {"dominated splitting constants", splitting_constants},
      {"invariance of the dominated frames", frame_invariance},
      {"strong monotonicity of catalog systems", strong_monotonicity},
      {"mean-value identity", mean_value_identity},
      {"hopf3d periodic instance", periodic_instance},
      {"QE fractions", qe_fractions},
      {"instability and local dichotomy", local_checks},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s [%d] %s: %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", index, name, out.detail.c_str(), secs);
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
