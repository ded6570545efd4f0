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

#include <Eigen/Dense>

namespace conedyn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Thin orthogonal-triangular factorization A = QR with diag(R) >= 0.
struct ThinQr {
  Mat q;
  Mat r;
};

ThinQr thin_qr_positive(const Mat& a);

/// Orthonormal basis of the column space of `a`. Throws InputError when the
/// columns are numerically dependent (relative tolerance `rank_tol`).
Mat orthonormalize(const Mat& a, double rank_tol = 1e-10);

/// Orthonormal basis of the orthogonal complement of span(a); `a` is assumed
/// to have full column rank.
Mat orthogonal_complement(const Mat& a);

double smallest_singular_value(const Mat& a);
double largest_singular_value(const Mat& a);

/// Principal angle machinery shared by the gap metric and frame checks:
/// returns the largest principal angle between two subspaces of equal
/// dimension given orthonormal bases.
double largest_principal_angle(const Mat& l1, const Mat& l2);

/// Smallest principal angle between two subspaces (any dimensions).
double smallest_principal_angle(const Mat& l1, const Mat& l2);

}  // namespace conedyn
