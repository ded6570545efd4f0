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

#include "json.hpp"

#include "conedyn/classification.hpp"
#include "conedyn/cone.hpp"
#include "conedyn/dynamics.hpp"
#include "conedyn/sampling.hpp"

namespace conedyn {

inline constexpr const char* kConfigSchema = "conedyn-config/1";

enum class ExperimentMode { Generic, Pb };

const char* to_string(ExperimentMode m);

struct ExperimentConfig {
  SystemSpec system;
  Mat cone_q;
  int cone_rank = 0;
  Box domain;
  IntegratorControl control{};
  std::int64_t n_samples = 100;
  std::uint64_t seed = 1;
  ExperimentMode mode = ExperimentMode::Generic;
  double transient = 60.0;
  double window = 20.0;
  bool skip_monotone_check = false;
  int monotone_pairs = 200;
  int threads = 0;
  ClassificationTolerances tolerances{};
  int spectrum_budget = 2;
  double spectrum_horizon = 200.0;
  double spectrum_window = 1.0;

  SemiflowSystem build() const { return build_system(system); }
  QuadraticCone cone() const { return QuadraticCone(cone_q, cone_rank); }
  /// Full validation: system parameters, cone signature, box, tolerances.
  void validate() const;
};

/// Strict parser for "conedyn-config/1" documents; unknown keys are errors.
/// Every failure is reported as ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Normalized echo with all defaults filled in.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace conedyn
