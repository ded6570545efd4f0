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

#include "conedyn/sampling.hpp"

#include <cmath>
#include <numbers>

#include <boost/random/sobol.hpp>

#include "conedyn/errors.hpp"

namespace conedyn {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

Vec Rng::normal_vector(Eigen::Index n) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Vec Rng::unit_vector(Eigen::Index n) {
  Vec v = normal_vector(n);
  double nv = v.norm();
  while (nv < 1e-12) {
    v = normal_vector(n);
    nv = v.norm();
  }
  return v / nv;
}

Vec Rng::in_ball(const Vec& center, double radius) {
  const Eigen::Index n = center.size();
  const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(n));
  return center + r * unit_vector(n);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over (seed, index).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void Box::validate() const {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw ConfigError("domain box: lower/upper must be nonempty and of equal length");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower(i)) || !std::isfinite(upper(i)) || !(upper(i) > lower(i))) {
      throw ConfigError("domain box must be bounded with positive volume");
    }
  }
}

ScrambledSobol::ScrambledSobol(int dim, std::uint64_t seed) : dim_(dim) {
  if (dim < 1) throw InputError("sobol dimension must be positive");
  Rng rng(stream_seed(seed, 0x50B0));
  shifts_.resize(static_cast<std::size_t>(dim));
  for (auto& s : shifts_) s = static_cast<std::uint32_t>(rng.next() >> 32);
}

std::vector<Vec> ScrambledSobol::generate_unit(std::size_t count) {
  boost::random::sobol engine(static_cast<std::size_t>(dim_));
  std::vector<Vec> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vec p(dim_);
    for (int d = 0; d < dim_; ++d) {
      const auto raw = static_cast<std::uint32_t>(engine() >> 32);
      const std::uint32_t shifted = raw ^ shifts_[static_cast<std::size_t>(d)];
      // Center of the dyadic cell keeps points strictly inside (0, 1).
      p(d) = (static_cast<double>(shifted) + 0.5) * 0x1.0p-32;
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<Vec> ScrambledSobol::generate(const Box& box, std::size_t count) {
  if (box.dim() != dim_) throw InputError("sobol: box dimension mismatch");
  auto pts = generate_unit(count);
  for (auto& p : pts) {
    p = box.lower.array() + (box.upper - box.lower).array() * p.array();
  }
  return pts;
}

}  // namespace conedyn
