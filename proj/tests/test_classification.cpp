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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "conedyn/classification.hpp"
#include "conedyn/errors.hpp"

using namespace conedyn;

namespace {

Vec vec(std::initializer_list<double> d) {
  Vec v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v;
}

Mat diag3(double a, double b, double c) { return vec({a, b, c}).asDiagonal(); }

SemiflowSystem hopf(double b = 1.0) { return build_system({"hopf3d", {{"a", 1.0}, {"b", b}}, std::nullopt}); }

Mat rotation13() {
  Mat a = Mat::Zero(3, 3);
  a(0, 2) = -1;
  a(2, 0) = 1;
  return a;
}

// e1 decays, (e2, e3) rotate without contraction.
Mat decay_rotate() {
  Mat a = Mat::Zero(3, 3);
  a(0, 0) = -1;
  a(1, 2) = -1;
  a(2, 1) = 1;
  return a;
}

std::vector<double> multiples(double step, int count) {
  std::vector<double> t;
  for (int i = 1; i <= count; ++i) t.push_back(step * i);
  return t;
}

}  // namespace

TEST_CASE("pseudo-ordered detection") {
  Mat m1 = -Mat::Identity(2, 2);
  Mat q1(2, 2);
  q1 << 1, 0, 0, -1;
  const TrajectorySegment decay = integrate(linear_system(m1), vec({1.0, 0.0}), 5.0);
  const PseudoOrderWitness w = detect_pseudo_ordered(decay, QuadraticCone(q1, 1));
  CHECK(w.found);
  CHECK(w.t1 != w.t2);
  CHECK(w.membership == MembershipClass::Interior);

  const SemiflowSystem rc = build_system({"rot_contract", {}, std::nullopt});
  const TrajectorySegment spiral = integrate(rc, vec({0, 1, 0}), 10.0);
  const PseudoOrderWitness none = detect_pseudo_ordered(spiral, QuadraticCone(diag3(1, -1, -1), 1));
  CHECK_FALSE(none.found);

  const TrajectorySegment h = integrate(hopf(), vec({0.1, 0, 0.5}), 20.0);
  const PseudoOrderWitness hw = detect_pseudo_ordered(h, QuadraticCone(diag3(1, 1, -1), 2));
  CHECK(hw.found);
  CHECK(hw.difference_form > 0.0);

  // Stationary trajectory has no nonzero difference.
  const TrajectorySegment rest = integrate(hopf(), vec({0, 0, 0}), 5.0);
  CHECK_FALSE(detect_pseudo_ordered(rest, QuadraticCone(diag3(1, 1, -1), 2)).found);
}

TEST_CASE("omega cloud estimates") {
  const SemiflowSystem gw = build_system({"grad_well", {}, std::nullopt});
  const OmegaCloud single = estimate_omega(gw, vec({0.3, 0.2, 0.1}), 60.0, 20.0);
  CHECK(single.diameter < 1e-8);
  CHECK(single.min_rhs_norm < 1e-8);
  CHECK(single.recurrence_candidates.empty());

  const OmegaCloud cyc = estimate_omega(hopf(), vec({0.1, 0, 0.5}), 60.0, 20.0);
  CHECK(cyc.diameter == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(cyc.min_rhs_norm == doctest::Approx(1.0).epsilon(1e-6));
  REQUIRE_FALSE(cyc.recurrence_candidates.empty());
  CHECK(std::abs(cyc.recurrence_candidates.front().period - 2 * M_PI) < 1e-3);
  for (const Vec& p : cyc.points) CHECK(std::abs(p.head(2).norm() - 1.0) < 1e-6);

  const OmegaCloud rot = estimate_omega(linear_system(rotation13()), vec({1, 0, 0}), 5.0, 20.0);
  REQUIRE_FALSE(rot.recurrence_candidates.empty());
  CHECK(std::abs(rot.recurrence_candidates.front().period - 2 * M_PI) < 1e-6);

  CHECK_THROWS_AS(estimate_omega(gw, vec({0, 0, 0}), -1.0, 20.0), InputError);
}

TEST_CASE("classify omega") {
  const SemiflowSystem gw = build_system({"grad_well", {}, std::nullopt});
  const OmegaClassification eq = classify_omega(gw, estimate_omega(gw, vec({0.3, 0.2, 0.1}), 60, 20));
  CHECK(eq.cls == OmegaClass::Equilibrium);
  CHECK(eq.equilibrium_test);
  CHECK(eq.equilibrium_residual < 1e-12);
  CHECK((eq.equilibrium - vec({1, 0, 0})).norm() < 1e-9);
  CHECK(eq.contains_equilibrium);

  const OmegaClassification per = classify_omega(hopf(), estimate_omega(hopf(), vec({0.1, 0, 0.5}), 60, 20));
  CHECK(per.cls == OmegaClass::PeriodicOrbit);
  CHECK(per.periodic_test);
  CHECK(std::abs(per.period - 2 * M_PI) < 1e-4);
  CHECK_FALSE(per.contains_equilibrium);

  // Two incommensurate rotations fill a torus.
  Mat torus = Mat::Zero(4, 4);
  torus(0, 1) = -1;
  torus(1, 0) = 1;
  torus(2, 3) = -std::sqrt(2.0);
  torus(3, 2) = std::sqrt(2.0);
  const SemiflowSystem ts = linear_system(torus);
  const OmegaClassification other = classify_omega(ts, estimate_omega(ts, vec({1, 0, 1, 0}), 5, 40));
  CHECK(other.cls == OmegaClass::Other);
  CHECK_FALSE(other.periodic_test);
  CHECK_FALSE(other.equilibrium_test);

  CHECK_THROWS_AS(classify_omega(gw, OmegaCloud{}), InputError);
}

TEST_CASE("equilibrium refinement") {
  const SemiflowSystem gw = build_system({"grad_well", {{"m", 3.0}}, std::nullopt});
  const Vec z = refine_equilibrium(gw, vec({1.9, 0.01, -0.01}));
  CHECK((z - vec({2, 0, 0})).norm() < 1e-12);
}

TEST_CASE("trichotomy cases") {
  const QuadraticCone c2(diag3(1, 1, -1), 2);
  TrichotomyOptions opts;
  opts.horizon = 100;

  const SemiflowSystem src = linear_system(diag3(2, 1, -1));
  OmegaCloud origin;
  origin.points = {vec({0, 0, 0})};
  origin.times = {0.0};
  const TrichotomyReport a = trichotomy_case(src, origin, c2, opts);
  CHECK(a.result == TrichotomyCase::A);
  CHECK(a.lambda_k == doctest::Approx(1.0).epsilon(1e-6));

  const SemiflowSystem gw = build_system({"grad_well", {}, std::nullopt});
  const TrichotomyReport c = trichotomy_case(gw, estimate_omega(gw, vec({0.3, 0.2, 0.1}), 60, 20), c2, opts);
  CHECK(c.result == TrichotomyCase::C);
  CHECK(c.lambda_k == doctest::Approx(-2.0).epsilon(1e-6));

  const TrichotomyReport hc = trichotomy_case(hopf(), estimate_omega(hopf(), vec({0.1, 0, 0.5}), 60, 20), c2, opts);
  CHECK(hc.result == TrichotomyCase::C);
  CHECK(hc.lambda_k < 0.05);
  for (const auto& p : hc.points) CHECK(std::abs(p.lambda_k + 1.0) < 5e-2);

  opts.spectrum_budget = 0;
  CHECK_THROWS_AS(trichotomy_case(src, origin, c2, opts), InputError);
}

TEST_CASE("farthest point subsample") {
  std::vector<Vec> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(vec({static_cast<double>(i), 0}));
  const std::vector<Vec> s = farthest_point_subsample(pts, 2);
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0](0) - s[1](0)) == 9.0);
  CHECK(farthest_point_subsample(pts, 20).size() == 10);
}

TEST_CASE("instability at equilibria") {
  const QuadraticCone c2(diag3(1, 1, -1), 2);
  const InstabilityReport up = instability_check(linear_system(diag3(2, 1, -1)), c2, vec({0, 0, 0}));
  CHECK(up.positive);
  CHECK(up.per_size_min.size() == 5);
  CHECK(up.perturbations == 40);
  CHECK(up.delta_lower_bound > 1e-3);

  const InstabilityReport down = instability_check(linear_system(-Mat::Identity(3, 3)), c2, vec({0, 0, 0}));
  CHECK_FALSE(down.positive);
  CHECK(down.delta_lower_bound <= 1e-6 + 1e-15);
}

TEST_CASE("local dichotomy") {
  const QuadraticCone c2(diag3(1, 1, -1), 2);
  DichotomyOptions opts;
  opts.n_neighbors = 20;
  const DichotomyReport conv = local_dichotomy_check(linear_system(-Mat::Identity(3, 3)), c2, vec({0, 0, 0}), opts);
  CHECK(conv.positive);
  CHECK(conv.converged == 20);

  opts.horizon = 20;
  const DichotomyReport sad = local_dichotomy_check(linear_system(diag3(1, -1, -2)),
                                                    QuadraticCone(diag3(1, -1, -1), 1), vec({0, 0, 0}), opts);
  CHECK(sad.positive);
  CHECK(sad.ordered == 20);

  opts.horizon = 40;
  const DichotomyReport cyc = local_dichotomy_check(hopf(4.0), c2, vec({1, 0, 0}), opts);
  CHECK(cyc.positive);
  CHECK(cyc.fraction == 1.0);

  const DichotomyReport rot = local_dichotomy_check(linear_system(decay_rotate()),
                                                    QuadraticCone(diag3(1, -1, -1), 1), vec({0, 1, 0}), opts);
  CHECK_FALSE(rot.positive);
  CHECK(rot.undecided > 0);
}

TEST_CASE("colimit branches") {
  const QuadraticCone c2(diag3(1, 1, -1), 2);
  const ColimitReport eq =
      colimit_check(linear_system(-Mat::Identity(3, 3)), c2, vec({1, 0, 0}), vec({1.1, 0, 0}), multiples(2.0, 20));
  CHECK(eq.branch == ColimitBranch::Equilibrium);
  CHECK(eq.z.norm() < 1e-4);

  const ColimitReport po = colimit_check(hopf(), c2, vec({0.5, 0, 0}), vec({0.6, 0, 0}), multiples(2 * M_PI, 8));
  CHECK(po.branch == ColimitBranch::PseudoOrdered);
  CHECK((po.z - vec({1, 0, 0})).norm() < 1e-6);

  const ColimitReport nei = colimit_check(linear_system(decay_rotate()), QuadraticCone(diag3(1, -1, -1), 1),
                                          vec({0, 1, 0}), vec({1, 1, 0}), multiples(2 * M_PI, 6));
  CHECK(nei.branch == ColimitBranch::Neither);
  CHECK(nei.final_gap < 1e-4);

  const ColimitReport far = colimit_check(hopf(), c2, vec({0.5, 0, 0}), vec({0.6, 0.05, 0}), multiples(1.0, 8));
  CHECK(far.branch == ColimitBranch::Inapplicable);

  CHECK_THROWS_AS(colimit_check(hopf(), c2, vec({0, 0, 0}), vec({0, 0, 1}), multiples(1.0, 4)), InputError);
}

TEST_CASE("orbit pipeline") {
  const QuadraticCone c2(diag3(1, 1, -1), 2);
  OrbitOptions opts;
  opts.trichotomy.horizon = 100;
  const OrbitReport h = classify_orbit(hopf(4.0), c2, vec({0.1, 0, 0.5}), opts);
  CHECK(h.bounded);
  CHECK(h.failure.empty());
  CHECK(h.in_q);
  CHECK_FALSE(h.in_ce);
  CHECK(h.in_qe);
  CHECK(h.omega.cls == OmegaClass::PeriodicOrbit);

  const SemiflowSystem blow = linear_system(diag3(2, 1, -1));
  const OrbitReport b = classify_orbit(blow, c2, vec({1, 0, 0}), opts);
  CHECK_FALSE(b.bounded);
  CHECK_FALSE(b.in_qe);

  CHECK(std::string(to_string(OmegaClass::PeriodicOrbit)) == "PeriodicOrbit");
  CHECK(std::string(to_string(TrichotomyCase::B)) == "B");
  CHECK(std::string(to_string(ColimitBranch::Neither)) == "neither");
}

TEST_CASE("tolerance validation") {
  ClassificationTolerances tol;
  CHECK_NOTHROW(tol.validate());
  tol.per_tol = -1;
  CHECK_THROWS_AS(tol.validate(), ConfigError);
}
