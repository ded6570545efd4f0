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

#include "conedyn/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "conedyn/errors.hpp"
#include "conedyn/optimize.hpp"
#include "conedyn/sampling.hpp"

namespace conedyn {

const char* to_string(MembershipClass c) {
  switch (c) {
    case MembershipClass::Interior: return "Interior";
    case MembershipClass::Boundary: return "Boundary";
    case MembershipClass::Outside: return "Outside";
  }
  return "?";
}

const char* to_string(OrderRelation r) {
  switch (r) {
    case OrderRelation::StronglyOrdered: return "StronglyOrdered";
    case OrderRelation::Ordered: return "Ordered";
    case OrderRelation::Unordered: return "Unordered";
    case OrderRelation::Equal: return "Equal";
  }
  return "?";
}

const char* to_string(SubspacePlacement p) {
  switch (p) {
    case SubspacePlacement::InsideInterior: return "InsideInterior";
    case SubspacePlacement::InsideWithBoundary: return "InsideWithBoundary";
    case SubspacePlacement::NotInside: return "NotInside";
  }
  return "?";
}

const char* to_string(DistanceMethod m) {
  return m == DistanceMethod::Secular ? "secular" : "sampled";
}

namespace {

constexpr double kSignatureTol = 1e-10;

bool invertible(const Mat& r) {
  if (r.rows() != r.cols() || r.rows() == 0) return false;
  if (!r.allFinite()) return false;
  const Vec sv = Eigen::JacobiSVD<Mat>(r).singularValues();
  // Contracting flow maps are badly conditioned but still invertible.
  return sv(0) > 0.0 && sv(sv.size() - 1) > 1e-14 * static_cast<double>(r.rows()) * sv(0);
}

struct EigenGroup {
  double lambda;
  double weight;  // sum of squared coefficients of v in the group
  std::vector<Eigen::Index> members;
};

}  // namespace

QuadraticCone::QuadraticCone(Mat q, int rank, double boundary_tol)
    : q_(std::move(q)), rank_(rank), boundary_tol_(boundary_tol) {
  const Eigen::Index n = q_.rows();
  if (n < 2 || q_.cols() != n) throw InputError("cone matrix must be square with n >= 2");
  if (rank_ < 1 || rank_ >= n) throw InputError("cone rank must satisfy 1 <= k < n");
  if (!q_.allFinite()) throw InputError("cone matrix has non-finite entries");
  if (!(boundary_tol_ >= 0.0)) throw InputError("boundary tolerance must be nonnegative");
  const double scale = std::max(1e-300, q_.cwiseAbs().maxCoeff());
  if ((q_ - q_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InputError("cone matrix must be symmetric");
  }
  q_ = 0.5 * (q_ + q_.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Mat> eig(q_);
  if (eig.info() != Eigen::Success) throw InputError("eigen-decomposition of Q failed");
  // Eigen returns ascending order; flip so the positive block comes first.
  evals_ = eig.eigenvalues().reverse();
  evecs_ = eig.eigenvectors().rowwise().reverse();
  const double emax = evals_.cwiseAbs().maxCoeff();
  int pos = 0;
  int neg = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(evals_(i)) <= kSignatureTol * emax) {
      throw InputError("cone matrix is singular (zero eigenvalue)");
    }
    (evals_(i) > 0.0 ? pos : neg) += 1;
  }
  if (pos != rank_) {
    std::ostringstream os;
    os << "cone signature (" << pos << ", " << neg << ") does not match declared rank " << rank_;
    throw InputError(os.str());
  }
}

void QuadraticCone::check_dim(const Vec& v, const char* what) const {
  if (v.size() != q_.rows()) {
    std::ostringstream os;
    os << what << ": dimension " << v.size() << " does not match cone dimension " << q_.rows();
    throw InputError(os.str());
  }
}

double QuadraticCone::quadratic_form(const Vec& v) const {
  check_dim(v, "quadratic_form");
  return v.dot(q_ * v);
}

ConeMembership QuadraticCone::membership(const Vec& v) const {
  check_dim(v, "membership");
  const double nn = v.squaredNorm();
  if (nn == 0.0) return {MembershipClass::Boundary, 0.0};
  const double form = v.dot(q_ * v) / nn;
  if (form > boundary_tol_) return {MembershipClass::Interior, form};
  if (std::abs(form) <= boundary_tol_) return {MembershipClass::Boundary, form};
  return {MembershipClass::Outside, form};
}

OrderRelation QuadraticCone::ordered(const Vec& x, const Vec& y) const {
  check_dim(x, "ordered");
  check_dim(y, "ordered");
  const Vec d = x - y;
  if (d.norm() <= 1e-12 * std::max({1.0, x.norm(), y.norm()})) return OrderRelation::Equal;
  switch (membership(d).cls) {
    case MembershipClass::Interior: return OrderRelation::StronglyOrdered;
    case MembershipClass::Boundary: return OrderRelation::Ordered;
    case MembershipClass::Outside: return OrderRelation::Unordered;
  }
  return OrderRelation::Unordered;
}

Vec QuadraticCone::boundary_direction(const Vec& a, const Vec& b) const {
  return cone_direction(a, b, 1.0);
}

Vec QuadraticCone::cone_direction(const Vec& a, const Vec& b, double rho) const {
  const Eigen::Index n = q_.rows();
  const Eigen::Index k = rank_;
  if (a.size() != k || b.size() != n - k) throw InputError("cone_direction: parameter sizes");
  Vec w(n);
  double pa = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) pa += evals_(i) * a(i) * a(i);
  double pb = 0.0;
  for (Eigen::Index j = 0; j < n - k; ++j) pb += -evals_(k + j) * b(j) * b(j);
  if (!(pa > 0.0)) {
    w.head(k).setZero();
    w(0) = 1.0 / std::sqrt(evals_(0));
  } else {
    w.head(k) = a / std::sqrt(pa);
  }
  if (!(pb > 0.0)) {
    w.tail(n - k).setZero();
    w(k) = rho / std::sqrt(-evals_(k));
  } else {
    w.tail(n - k) = rho * b / std::sqrt(pb);
  }
  return evecs_ * (w / w.norm());
}

BoundaryDistance QuadraticCone::boundary_distance(const Vec& v) const {
  check_dim(v, "distance_to_complement");
  if (std::abs(v.norm() - 1.0) > 1e-9) throw InputError("distance_to_complement needs a unit vector");
  if (membership(v).cls != MembershipClass::Interior) {
    return {0.0, v, DistanceMethod::Secular};
  }
  const Eigen::Index n = q_.rows();
  const Vec c = evecs_.transpose() * v;
  const double emax = evals_.cwiseAbs().maxCoeff();

  std::vector<EigenGroup> groups;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!groups.empty() && std::abs(groups.back().lambda - evals_(i)) <= 1e-12 * emax) {
      groups.back().weight += c(i) * c(i);
      groups.back().members.push_back(i);
    } else {
      groups.push_back({evals_(i), c(i) * c(i), {i}});
    }
  }

  // Stationary points of |u - v|^2 on the quadric: u(mu) = (I + mu Q)^{-1} v,
  // with secular function g(mu) = sum lambda c^2 / (1 + mu lambda)^2.
  auto secular = [&](double mu) {
    double s = 0.0;
    for (const auto& g : groups) {
      const double den = 1.0 + mu * g.lambda;
      s += g.lambda * g.weight / (den * den);
    }
    return s;
  };

  double best = 1.0;  // u = 0 lies on the quadric
  Vec best_u = Vec::Zero(n);
  bool found = false;
  const double form_tol = 1e-8 * emax;
  auto consider = [&](const Vec& u) {
    if (!u.allFinite()) return;
    double form = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) form += evals_(i) * u(i) * u(i);
    if (std::abs(form) > form_tol * std::max(1.0, u.squaredNorm())) return;
    const double d = (u - c).norm();
    found = true;
    if (d < best) {
      best = d;
      best_u = u;
    }
  };

  std::vector<double> poles;
  for (const auto& g : groups) poles.push_back(-1.0 / g.lambda);
  std::sort(poles.begin(), poles.end());

  constexpr int kGrid = 96;
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t iv = 0; iv <= poles.size(); ++iv) {
    const double lo = iv == 0 ? -inf : poles[iv - 1];
    const double hi = iv == poles.size() ? inf : poles[iv];
    std::vector<double> mus;
    mus.reserve(kGrid);
    for (int j = 1; j < kGrid; ++j) {
      const double s = static_cast<double>(j) / kGrid;
      double mu = 0.0;
      if (std::isinf(lo)) {
        mu = hi - std::tan(0.5 * std::numbers::pi * (1.0 - s)) * std::max(1.0, std::abs(hi));
      } else if (std::isinf(hi)) {
        mu = lo + std::tan(0.5 * std::numbers::pi * s) * std::max(1.0, std::abs(lo));
      } else {
        mu = lo + (hi - lo) * 0.5 * (1.0 - std::cos(std::numbers::pi * s));
      }
      if (mu > lo && mu < hi && std::isfinite(mu)) mus.push_back(mu);
    }
    std::sort(mus.begin(), mus.end());
    for (std::size_t j = 0; j + 1 < mus.size(); ++j) {
      const double fa = secular(mus[j]);
      const double fb = secular(mus[j + 1]);
      if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
      if ((fa < 0.0) == (fb < 0.0) && fa != 0.0 && fb != 0.0) continue;
      const double mu = optimize::bracketed_root(secular, mus[j], mus[j + 1], fa, fb);
      Vec u(n);
      for (Eigen::Index i = 0; i < n; ++i) u(i) = c(i) / (1.0 + mu * evals_(i));
      consider(u);
    }
  }

  // Degenerate ("hard") case: the minimizer sits at a pole whose eigen-block
  // carries no weight of v.
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    const double mu = -1.0 / g.lambda;
    Vec u = Vec::Zero(n);
    double rest = 0.0;
    bool ok = true;
    for (std::size_t hj = 0; hj < groups.size(); ++hj) {
      if (hj == gi) continue;
      const double den = 1.0 + mu * groups[hj].lambda;
      if (std::abs(den) < 1e-14) {
        ok = false;
        break;
      }
      for (auto i : groups[hj].members) {
        u(i) = c(i) / den;
        rest += evals_(i) * u(i) * u(i);
      }
    }
    if (!ok) continue;
    const double t2 = -rest / g.lambda;
    if (t2 < 0.0) continue;
    const double t = std::sqrt(t2);
    const double wnorm = std::sqrt(g.weight);
    for (auto i : g.members) {
      u(i) = wnorm > 0.0 ? t * c(i) / wnorm : (i == g.members.front() ? t : 0.0);
    }
    consider(u);
  }

  if (!found || !std::isfinite(best)) {
    return boundary_distance_sampled(v);
  }
  return {best, evecs_ * best_u, DistanceMethod::Secular};
}

BoundaryDistance QuadraticCone::boundary_distance_sampled(const Vec& v, int samples,
                                                          std::uint64_t seed) const {
  check_dim(v, "distance_to_complement");
  if (membership(v).cls != MembershipClass::Interior) return {0.0, v, DistanceMethod::Sampled};
  const Eigen::Index n = q_.rows();
  const Eigen::Index k = rank_;
  // d(v, quadric)^2 = 1 - max_w (v.w)^2 over unit boundary directions w.
  auto score = [&](const Vec& ab) {
    const Vec w = boundary_direction(ab.head(k), ab.tail(n - k));
    const double p = v.dot(w);
    return 1.0 - p * p;
  };
  Rng rng(seed);
  constexpr int kKeep = 8;
  std::vector<std::pair<double, Vec>> top;
  for (int s = 0; s < samples; ++s) {
    Vec ab = rng.normal_vector(n);
    const double f = score(ab);
    if (static_cast<int>(top.size()) < kKeep || f < top.back().first) {
      top.emplace_back(f, std::move(ab));
      std::sort(top.begin(), top.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      if (static_cast<int>(top.size()) > kKeep) top.pop_back();
    }
  }
  double best = 1.0;
  Vec best_ab = top.front().second;
  for (const auto& [f0, ab0] : top) {
    auto r = optimize::nelder_mead(score, ab0, 0.1, 1e-15, 3000);
    if (r.value < best) {
      best = r.value;
      best_ab = r.x;
    }
  }
  const Vec w = boundary_direction(best_ab.head(k), best_ab.tail(n - k));
  return {std::sqrt(std::max(0.0, best)), v.dot(w) * w, DistanceMethod::Sampled};
}

QuadraticCone QuadraticCone::image(const Mat& r) const {
  if (r.rows() != q_.rows() || r.cols() != q_.rows()) throw InputError("image_cone: R has wrong shape");
  if (!invertible(r)) throw InputError("image_cone: R is singular");
  const Mat rinv = r.partialPivLu().inverse();
  Mat qp = rinv.transpose() * q_ * rinv;
  qp = 0.5 * (qp + qp.transpose()).eval();
  return QuadraticCone(std::move(qp), rank_, boundary_tol_);
}

FocusingReport QuadraticCone::separation_index(const Mat& r, const SeparationIndexOptions& opts) const {
  const Eigen::Index n = q_.rows();
  const Eigen::Index k = rank_;
  if (r.rows() != n || r.cols() != n) throw InputError("separation_index: R has wrong shape");
  if (!invertible(r)) throw InputError("separation_index: R is singular");

  Rng rng(opts.seed);
  FocusingReport rep;

  // R(C \ {0}) must land in Int C; the boundary of C is where it fails first.
  auto mapped = [&](const Vec& u) {
    Vec w = r * u;
    return Vec(w / w.norm());
  };
  for (int s = 0; s < opts.positivity_samples; ++s) {
    const Vec a = rng.normal_vector(k);
    const Vec b = rng.normal_vector(n - k);
    const double rho = (s % 4 == 0) ? rng.uniform() : 1.0;
    const Vec w = mapped(cone_direction(a, b, rho));
    const auto m = membership(w);
    if (m.cls != MembershipClass::Interior) {
      rep.kappa = 0.0;
      rep.argmin_vector = w;
      rep.strongly_positive = false;
      rep.witness_class = m.cls;
      return rep;
    }
  }

  // The infimum over unit vectors of R C is attained on R(boundary of C).
  bool sampled = false;
  auto objective = [&](const Vec& ab) {
    const Vec w = mapped(boundary_direction(ab.head(k), ab.tail(n - k)));
    const auto bd = boundary_distance(w);
    if (bd.method == DistanceMethod::Sampled) sampled = true;
    return bd.distance;
  };

  int starts = opts.multistart;
  if (starts <= 0) starts = n <= 4 ? 32 : (n <= 8 ? 128 : 256);
  std::vector<std::pair<double, Vec>> seeds;
  const int pool = 8 * starts;
  seeds.reserve(static_cast<std::size_t>(pool));
  for (int s = 0; s < pool; ++s) {
    Vec ab = rng.normal_vector(n);
    seeds.emplace_back(objective(ab), std::move(ab));
  }
  std::sort(seeds.begin(), seeds.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  double best = std::numeric_limits<double>::infinity();
  Vec best_ab;
  for (int s = 0; s < starts; ++s) {
    auto res = optimize::nelder_mead(objective, seeds[static_cast<std::size_t>(s)].second, 0.25,
                                     1e-14, 400 * static_cast<int>(n));
    if (res.value < best) {
      best = res.value;
      best_ab = res.x;
    }
  }
  rep.argmin_vector = mapped(boundary_direction(best_ab.head(k), best_ab.tail(n - k)));
  rep.kappa = best;
  rep.method = sampled ? DistanceMethod::Sampled : DistanceMethod::Secular;
  rep.witness_class = membership(rep.argmin_vector).cls;
  if (rep.witness_class != MembershipClass::Interior) {
    rep.kappa = 0.0;
    rep.strongly_positive = false;
  }
  return rep;
}

SubspacePlacement QuadraticCone::subspace_in_cone(const Mat& basis) const {
  if (basis.rows() != q_.rows()) throw InputError("subspace_in_cone: basis row count mismatch");
  const Mat b = orthonormalize(basis);
  const Mat s = b.transpose() * q_ * b;
  Eigen::SelfAdjointEigenSolver<Mat> eig(s);
  const double lo = eig.eigenvalues().minCoeff();
  if (lo > boundary_tol_) return SubspacePlacement::InsideInterior;
  if (lo >= -boundary_tol_) return SubspacePlacement::InsideWithBoundary;
  return SubspacePlacement::NotInside;
}

bool QuadraticCone::meets_only_at_origin(const Mat& basis) const {
  if (basis.rows() != q_.rows()) throw InputError("meets_only_at_origin: basis row count mismatch");
  const Mat b = orthonormalize(basis);
  const Mat s = b.transpose() * q_ * b;
  Eigen::SelfAdjointEigenSolver<Mat> eig(s);
  return eig.eigenvalues().maxCoeff() < -boundary_tol_;
}

std::string describe(const QuadraticCone& cone) {
  std::ostringstream os;
  os << "quadratic cone n=" << cone.dim() << " k=" << cone.rank();
  return os.str();
}

}  // namespace conedyn
