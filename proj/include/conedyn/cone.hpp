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
#include <string>

#include "conedyn/linalg.hpp"

namespace conedyn {

enum class MembershipClass { Interior, Boundary, Outside };
enum class OrderRelation { StronglyOrdered, Ordered, Unordered, Equal };
enum class SubspacePlacement { InsideInterior, InsideWithBoundary, NotInside };
enum class DistanceMethod { Secular, Sampled };

const char* to_string(MembershipClass c);
const char* to_string(OrderRelation r);
const char* to_string(SubspacePlacement p);
const char* to_string(DistanceMethod m);

struct ConeMembership {
  MembershipClass cls = MembershipClass::Boundary;
  /// v^T Q v / |v|^2 (zero for the zero vector).
  double normalized_form = 0.0;
};

struct BoundaryDistance {
  double distance = 0.0;
  /// Closest point of the quadric {u : u^T Q u = 0}.
  Vec nearest;
  DistanceMethod method = DistanceMethod::Secular;
};

struct FocusingReport {
  double kappa = 0.0;
  /// Unit vector of RC achieving the infimum (or the witness of a failed
  /// strong-positivity check).
  Vec argmin_vector;
  DistanceMethod method = DistanceMethod::Secular;
  bool strongly_positive = true;
  /// Membership in C of the witness; Outside/Boundary when R C is not inside
  /// Int C.
  MembershipClass witness_class = MembershipClass::Interior;
};

struct SeparationIndexOptions {
  /// 0 selects the default (32 for n <= 4, 128 for n <= 8, 256 beyond).
  int multistart = 0;
  int positivity_samples = 4096;
  std::uint64_t seed = 0x6b617070;
};

/// Rank-k quadratic cone C = {v : v^T Q v >= 0} with Q of signature
/// (k, n-k). Immutable; all queries are pure.
class QuadraticCone {
 public:
  QuadraticCone(Mat q, int rank, double boundary_tol = 1e-9);

  int dim() const { return static_cast<int>(q_.rows()); }
  int rank() const { return rank_; }
  const Mat& matrix() const { return q_; }
  double boundary_tol() const { return boundary_tol_; }

  /// Eigenvalues sorted descending (positive block first) and matching
  /// orthonormal eigenvectors.
  const Vec& eigenvalues() const { return evals_; }
  const Mat& eigenvectors() const { return evecs_; }
  Mat positive_eigenspace() const { return evecs_.leftCols(rank_); }
  Mat negative_eigenspace() const { return evecs_.rightCols(dim() - rank_); }

  double quadratic_form(const Vec& v) const;
  ConeMembership membership(const Vec& v) const;
  OrderRelation ordered(const Vec& x, const Vec& y) const;

  /// Euclidean distance from a unit vector to X \ C; zero when v is not
  /// Interior. Secular-equation solve with a sampled fallback.
  BoundaryDistance boundary_distance(const Vec& unit_v) const;
  double distance_to_complement(const Vec& unit_v) const {
    return boundary_distance(unit_v).distance;
  }

  /// Sampled route to the same distance; exposed for cross-checks.
  BoundaryDistance boundary_distance_sampled(const Vec& unit_v, int samples = 20000,
                                             std::uint64_t seed = 0xb0d) const;

  /// Cone R C, i.e. Q' = R^{-T} Q R^{-1}.
  QuadraticCone image(const Mat& r) const;

  /// Separation index of R: inf over unit w in R C of d(w, X \ C).
  FocusingReport separation_index(const Mat& r, const SeparationIndexOptions& opts = {}) const;

  SubspacePlacement subspace_in_cone(const Mat& basis) const;
  /// True iff span(basis) meets C only at 0 (restricted form negative definite).
  bool meets_only_at_origin(const Mat& basis) const;

  /// Unit direction on the boundary built from free coordinates: `a` picks
  /// a direction in the positive eigenspace, `b` in the negative one.
  Vec boundary_direction(const Vec& a, const Vec& b) const;
  /// Unit vector in C with normalized form controlled by `rho` in [0, 1]:
  /// rho = 0 lies in the positive eigenspace, rho = 1 on the boundary.
  Vec cone_direction(const Vec& a, const Vec& b, double rho) const;

 private:
  void check_dim(const Vec& v, const char* what) const;

  Mat q_;
  int rank_;
  double boundary_tol_;
  Vec evals_;
  Mat evecs_;
};

/// Short human-readable description for logs and reports.
std::string describe(const QuadraticCone& cone);

}  // namespace conedyn
