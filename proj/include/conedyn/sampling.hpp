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
#include <random>
#include <vector>

#include "conedyn/linalg.hpp"

namespace conedyn {

/// Seeded 64-bit generator with platform-independent variate transforms
/// (the std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  Vec normal_vector(Eigen::Index n);
  Vec unit_vector(Eigen::Index n);
  /// Uniform point in the closed ball of the given radius.
  Vec in_ball(const Vec& center, double radius);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derives an independent stream seed for item `index` of a seeded run.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Axis-aligned box D = prod [lower_i, upper_i].
struct Box {
  Vec lower;
  Vec upper;

  Eigen::Index dim() const { return lower.size(); }
  double diameter() const { return (upper - lower).norm(); }
  Vec center() const { return 0.5 * (lower + upper); }
  void validate() const;
};

/// Scrambled Sobol points in the unit cube, mapped into a box. Scrambling is
/// a seeded random digital shift per coordinate.
class ScrambledSobol {
 public:
  ScrambledSobol(int dim, std::uint64_t seed);
  std::vector<Vec> generate(const Box& box, std::size_t count);
  std::vector<Vec> generate_unit(std::size_t count);

 private:
  int dim_;
  std::vector<std::uint32_t> shifts_;
};

}  // namespace conedyn
