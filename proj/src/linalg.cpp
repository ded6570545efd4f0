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

#include "conedyn/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "conedyn/errors.hpp"

namespace conedyn {

ThinQr thin_qr_positive(const Mat& a) {
  const Eigen::Index m = a.rows();
  const Eigen::Index k = a.cols();
  Eigen::HouseholderQR<Mat> qr(a);
  ThinQr out;
  out.q = qr.householderQ() * Mat::Identity(m, k);
  out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (out.r(j, j) < 0.0) {
      out.r.row(j) *= -1.0;
      out.q.col(j) *= -1.0;
    }
  }
  return out;
}

Mat orthonormalize(const Mat& a, double rank_tol) {
  if (a.cols() == 0 || a.cols() > a.rows()) {
    throw InputError("orthonormalize: basis must have 1..n columns");
  }
  ThinQr qr = thin_qr_positive(a);
  const double scale = std::max(1e-300, a.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < qr.r.cols(); ++j) {
    if (!(qr.r(j, j) > rank_tol * scale)) {
      throw InputError("basis is rank deficient");
    }
  }
  return qr.q;
}

Mat orthogonal_complement(const Mat& a) {
  const Eigen::Index n = a.rows();
  Eigen::HouseholderQR<Mat> qr(a);
  Mat full = qr.householderQ() * Mat::Identity(n, n);
  return full.rightCols(n - a.cols());
}

double smallest_singular_value(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

double largest_singular_value(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  return s.size() == 0 ? 0.0 : s(0);
}

double largest_principal_angle(const Mat& l1, const Mat& l2) {
  // sin from the residual of projecting l2 onto span(l1), cos from the
  // smallest canonical correlation; atan2 keeps accuracy at both ends.
  const Mat cross = l1.transpose() * l2;
  const Mat resid = l2 - l1 * cross;
  const double s = std::min(1.0, largest_singular_value(resid));
  const double c = std::min(1.0, smallest_singular_value(cross));
  return std::atan2(s, c);
}

double smallest_principal_angle(const Mat& l1, const Mat& l2) {
  const Mat cross = l1.transpose() * l2;
  const double c = std::min(1.0, largest_singular_value(cross));
  return std::acos(c);
}

}  // namespace conedyn
