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
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "conedyn/cone.hpp"
#include "conedyn/errors.hpp"
#include "conedyn/linalg.hpp"
#include "conedyn/sampling.hpp"

using namespace conedyn;

namespace {

Mat diag(std::initializer_list<double> d) {
  Vec v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

Vec vec(std::initializer_list<double> d) {
  Vec v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v;
}

// Random symmetric Q with signature (k, n-k) and spread-out eigenvalues.
Mat random_q(int n, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.3, 3.0);
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  const Mat o = Eigen::HouseholderQR<Mat>(a).householderQ();
  Vec d(n);
  for (int i = 0; i < n; ++i) d(i) = (i < k ? 1.0 : -1.0) * u(rng);
  Mat q = o * d.asDiagonal() * o.transpose();
  return 0.5 * (q + q.transpose());
}

}  // namespace

TEST_CASE("quadratic form and membership") {
  const QuadraticCone c(diag({1, 1, -1}), 2);
  CHECK(c.quadratic_form(vec({1, 0, 0})) == doctest::Approx(1.0));
  CHECK(c.quadratic_form(vec({1, 0, 1})) == doctest::Approx(0.0));
  CHECK(QuadraticCone(diag({1, -1, -1}), 1).quadratic_form(vec({1, 2, 2})) == doctest::Approx(-7.0));

  auto m = c.membership(vec({0, 0, 1}));
  CHECK(m.cls == MembershipClass::Outside);
  CHECK(m.normalized_form == doctest::Approx(-1.0));
  m = c.membership(vec({1, 0, 0}));
  CHECK(m.cls == MembershipClass::Interior);
  CHECK(m.normalized_form == doctest::Approx(1.0));
  m = c.membership(vec({3, 0, 3}));
  CHECK(m.cls == MembershipClass::Boundary);
  CHECK(m.normalized_form == doctest::Approx(0.0));
  CHECK(c.membership(Vec::Zero(3)).cls == MembershipClass::Boundary);
  CHECK_THROWS_AS(c.membership(vec({1, 0})), InputError);
}

TEST_CASE("ordering relation") {
  const QuadraticCone c(diag({1, 1, -1}), 2);
  CHECK(c.ordered(vec({2, 0, 0}), vec({1, 0, 0})) == OrderRelation::StronglyOrdered);
  CHECK(c.ordered(vec({0, 0, 2}), vec({0, 0, 1})) == OrderRelation::Unordered);
  CHECK(c.ordered(vec({1, 0, 1}), vec({0, 0, 0})) == OrderRelation::Ordered);
  CHECK(c.ordered(vec({0.3, -2, 5}), vec({0.3, -2, 5})) == OrderRelation::Equal);
}

TEST_CASE("constructor validates signature and symmetry") {
  CHECK_THROWS_AS(QuadraticCone(diag({1, 1, -1}), 1), InputError);
  CHECK_THROWS_AS(QuadraticCone(diag({1, 0, -1}), 1), InputError);
  Mat ns = diag({1, 1, -1});
  ns(0, 1) = 0.5;
  CHECK_THROWS_AS(QuadraticCone(ns, 2), InputError);
  Mat nan = diag({1, 1, -1});
  nan(2, 2) = std::nan("");
  CHECK_THROWS(QuadraticCone(nan, 2));

  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 5;
    const int k = 1 + t % (n - 1);
    const QuadraticCone c(random_q(n, k, rng), k);
    int pos = 0;
    for (Eigen::Index i = 0; i < c.eigenvalues().size(); ++i) pos += c.eigenvalues()(i) > 0;
    CHECK(pos == k);
    CHECK(c.subspace_in_cone(c.positive_eigenspace()) == SubspacePlacement::InsideInterior);
    CHECK(c.meets_only_at_origin(c.negative_eigenspace()));
  }
}

TEST_CASE("membership is scale invariant") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> lam(-50.0, 50.0);
  const QuadraticCone c(random_q(4, 2, rng), 2);
  for (int i = 0; i < 1000; ++i) {
    Vec v(4);
    for (auto& x : v) x = g(rng);
    double l = lam(rng);
    if (std::abs(l) < 1e-3) l = 1.0;
    CHECK(c.membership(v).cls == c.membership(l * v).cls);
  }
}

TEST_CASE("distance to complement: closed-form cases") {
  const QuadraticCone c(diag({1, 1, -1}), 2);
  CHECK(c.distance_to_complement(vec({1, 0, 0})) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  const QuadraticCone c1(diag({1, -1, -1}), 1);
  CHECK(c1.distance_to_complement(vec({1, 0, 0})) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(c.distance_to_complement(vec({0, 0, 1})) == 0.0);
  CHECK(c.distance_to_complement(vec({1, 0, 1}).normalized()) == 0.0);
  CHECK_THROWS_AS(c.distance_to_complement(vec({2, 0, 0})), InputError);

  // The nearest point lies on the quadric.
  const Vec v = vec({0.9, 0.3, 0.2}).normalized();
  const BoundaryDistance bd = c.boundary_distance(v);
  CHECK(bd.method == DistanceMethod::Secular);
  CHECK(std::abs(c.quadratic_form(bd.nearest)) < 1e-9 * bd.nearest.squaredNorm() + 1e-12);
  CHECK((bd.nearest - v).norm() == doctest::Approx(bd.distance).epsilon(1e-9));
}

TEST_CASE("distance to complement agrees with the sampling oracle") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  for (int t = 0; t < 4; ++t) {
    const int n = 3 + t;
    const int k = 1 + t % (n - 1);
    const Mat q = random_q(n, k, rng);
    const QuadraticCone c(q, k);
    int done = 0;
    while (done < 3) {
      Vec v(n);
      for (auto& x : v) x = g(rng);
      v.normalize();
      if (c.membership(v).cls != MembershipClass::Interior) continue;
      ++done;
      const double d = c.distance_to_complement(v);
      CHECK(d == doctest::Approx(oracle::distance_to_complement(q, v, 20000, 7 + done)).epsilon(1e-4));
      CHECK(d == doctest::Approx(c.boundary_distance_sampled(v).distance).epsilon(1e-4));
    }
  }
}

TEST_CASE("complement duality: zero distance exactly off the interior") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  const QuadraticCone c(random_q(5, 3, rng), 3);
  for (int i = 0; i < 300; ++i) {
    Vec v(5);
    for (auto& x : v) x = g(rng);
    v.normalize();
    const bool interior = c.membership(v).cls == MembershipClass::Interior;
    CHECK((c.distance_to_complement(v) > 0.0) == interior);
  }
}

TEST_CASE("image cone") {
  const QuadraticCone c(diag({1, 1, -1}), 2);
  CHECK((c.image(Mat::Identity(3, 3)).matrix() - c.matrix()).norm() < 1e-14);
  CHECK((c.image(2.0 * Mat::Identity(3, 3)).matrix() - diag({0.25, 0.25, -0.25})).norm() < 1e-14);
  const QuadraticCone c1(diag({1, -1, -1}), 1);
  CHECK((c1.image(diag({1, 0.5, 0.5})).matrix() - diag({1, -4, -4})).norm() < 1e-12);
  CHECK_THROWS_AS(c.image(diag({1, 1, 0})), InputError);

  // Pushforward correctness on random cone vectors.
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  const QuadraticCone c4(random_q(4, 2, rng), 2);
  Mat r(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = g(rng) + (i == j ? 3.0 : 0.0);
  const QuadraticCone img = c4.image(r);
  Rng local(3);
  for (int i = 0; i < 1000; ++i) {
    const Vec v = c4.cone_direction(local.normal_vector(2), local.normal_vector(2), local.uniform());
    const Vec rv = r * v;
    CHECK(img.quadratic_form(rv) >= -1e-9 * rv.squaredNorm());
  }
}

TEST_CASE("separation index") {
  const QuadraticCone c1(diag({1, -1, -1}), 1);
  const FocusingReport rep = c1.separation_index(diag({1, 0.5, 0.5}));
  CHECK(rep.strongly_positive);
  CHECK(rep.kappa == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(2e-3 * std::sqrt(10.0)));
  CHECK(std::abs(std::abs(rep.argmin_vector(0)) - 2.0 / std::sqrt(5.0)) < 1e-3);

  const FocusingReport id = c1.separation_index(Mat::Identity(3, 3));
  CHECK(id.kappa < 1e-6);

  const QuadraticCone c2(diag({1, 1, -1}), 2);
  const double kap = c2.separation_index(diag({1, 1, 0.01})).kappa;
  CHECK(kap > 0.7);
  CHECK(kap < 0.7072);

  // A rotation mixing e1 and e3 carries part of C outside C.
  Mat rot = Mat::Identity(3, 3);
  rot(0, 0) = std::cos(0.5);
  rot(0, 2) = -std::sin(0.5);
  rot(2, 0) = std::sin(0.5);
  rot(2, 2) = std::cos(0.5);
  const FocusingReport bad = c1.separation_index(rot);
  CHECK_FALSE(bad.strongly_positive);
  CHECK(bad.kappa == 0.0);
  CHECK_THROWS_AS(c1.separation_index(diag({1, 0, 1})), InputError);
}

TEST_CASE("separation index agrees with a dense-sampling oracle") {
  const Mat q = diag({1, 1, -1});
  const QuadraticCone c(q, 2);
  Mat r = diag({1.5, 1.0, 0.4});
  r(0, 2) = 0.2;
  const double kappa = c.separation_index(r).kappa;
  const double ref = oracle::separation_index(q, r, 3000, 3000, 11);
  CHECK(kappa <= ref + 1e-9);
  CHECK(kappa == doctest::Approx(ref).epsilon(5e-3));
}

TEST_CASE("focusing operators with strongly positive images have positive index") {
  std::mt19937_64 rng(57);
  std::normal_distribution<double> g;
  const QuadraticCone c(diag({1, 1, -1}), 2);
  int tested = 0;
  while (tested < 10) {
    Mat r = diag({1, 1, 0.3});
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) += 0.1 * g(rng);
    Rng local(static_cast<std::uint64_t>(tested) + 1);
    bool inside = true;
    for (int s = 0; s < 10000 && inside; ++s) {
      const Vec w = r * c.boundary_direction(local.normal_vector(2), local.normal_vector(1));
      inside = c.membership(w).cls == MembershipClass::Interior;
    }
    if (!inside) continue;
    ++tested;
    CHECK(c.separation_index(r).kappa > 0.0);
  }
}

TEST_CASE("subspace placement") {
  const QuadraticCone c(diag({1, 1, -1}), 2);
  Mat e12 = Mat::Zero(3, 2);
  e12(0, 0) = 1;
  e12(1, 1) = 1;
  CHECK(c.subspace_in_cone(e12) == SubspacePlacement::InsideInterior);
  CHECK(c.subspace_in_cone(vec({0, 0, 1})) == SubspacePlacement::NotInside);
  CHECK(c.subspace_in_cone(vec({1, 0, 1})) == SubspacePlacement::InsideWithBoundary);
  Mat deficient = Mat::Zero(3, 2);
  deficient(0, 0) = 1;
  deficient(0, 1) = 2;
  CHECK_THROWS_AS(c.subspace_in_cone(deficient), InputError);
}

TEST_CASE("cone directions respect the requested form") {
  const QuadraticCone c(diag({2, 1, -1, -3}), 2);
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const double rho = rng.uniform();
    const Vec d = c.cone_direction(rng.normal_vector(2), rng.normal_vector(2), rho);
    CHECK(d.norm() == doctest::Approx(1.0));
    CHECK(c.quadratic_form(d) >= -1e-12);
    const Vec b = c.boundary_direction(rng.normal_vector(2), rng.normal_vector(2));
    CHECK(std::abs(c.quadratic_form(b)) < 1e-12);
  }
}

TEST_CASE("gap metric and principal angles") {
  const Mat e1 = vec({1, 0});
  const Mat e2 = vec({0, 1});
  CHECK(largest_principal_angle(e1, e1) == doctest::Approx(0.0));
  CHECK(largest_principal_angle(e1, e2) == doctest::Approx(M_PI / 2));
  const Mat a = vec({std::cos(M_PI / 6), std::sin(M_PI / 6)});
  CHECK(largest_principal_angle(e1, a) == doctest::Approx(M_PI / 6));
  CHECK(smallest_singular_value(Mat(diag({3, 2, 1})).leftCols(2)) == doctest::Approx(2.0));
}
