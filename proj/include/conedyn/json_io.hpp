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

#include <string>

#include "json.hpp"

#include "conedyn/classification.hpp"
#include "conedyn/linalg.hpp"
#include "conedyn/monotonicity.hpp"
#include "conedyn/splitting.hpp"

namespace conedyn {

/// Serializes with every floating value printed as %.17g; non-finite
/// values become null. Output is a pure function of the document.
std::string dump_json(const nlohmann::json& doc, int indent = 2);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

/// Fixed-precision number for CSV cells.
std::string format_number(double v);

nlohmann::json to_json(const Vec& v);
nlohmann::json to_json(const Mat& m);
nlohmann::json to_json(const StepStats& s);
nlohmann::json to_json(const MonotoneVerdict& v);
nlohmann::json to_json(const FocusingCertificate& c);
nlohmann::json to_json(const LyapunovEstimate& e);
nlohmann::json to_json(const PseudoOrderWitness& w);
nlohmann::json to_json(const OmegaClassification& c);
nlohmann::json to_json(const TrichotomyReport& t);
nlohmann::json to_json(const OrbitReport& r);

/// Trajectory as CSV with columns t, x1..xn.
std::string trajectory_csv(const TrajectorySegment& traj);

}  // namespace conedyn
