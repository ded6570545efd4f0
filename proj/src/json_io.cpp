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

#include "conedyn/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "conedyn/errors.hpp"

namespace conedyn {

namespace {

void emit(const nlohmann::json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* colon = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        out += nlohmann::json(it.key()).dump();
        out += colon;
        emit(it.value(), indent, depth + 1, out);
      }
      out += nl;
      out += close_pad;
      out += "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      bool first = true;
      for (const auto& el : j) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad;
        emit(el, indent, depth + 1, out);
      }
      out += nl;
      out += close_pad;
      out += "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& doc, int indent) {
  std::string out;
  emit(doc, indent, 0, out);
  out += "\n";
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + tmp.string() + "' for writing");
    os << content;
    os.flush();
    if (!os) throw IoError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path + "'");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json to_json(const Vec& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

nlohmann::json to_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json to_json(const StepStats& s) {
  return {{"accepted_steps", s.accepted},
          {"rejected_steps", s.rejected},
          {"rhs_evaluations", s.rhs_evaluations}};
}

nlohmann::json to_json(const MonotoneVerdict& v) {
  nlohmann::json j;
  j["positive"] = v.positive();
  j["monotone_violations"] = v.monotone_violations;
  j["strong_violations"] = v.strong_violations;
  j["pairs_tested"] = v.pairs_tested;
  j["pairs_skipped"] = v.pairs_skipped;
  j["min_interior_margin"] = v.min_interior_margin;
  j["worst_pair"] = {{"x", to_json(v.worst_x)}, {"y", to_json(v.worst_y)}, {"t", v.worst_t}};
  j["runtime_stats"] = to_json(v.stats);
  return j;
}

nlohmann::json to_json(const FocusingCertificate& c) {
  nlohmann::json j;
  j["positive"] = c.positive;
  j["delta"] = c.delta;
  j["T_horizon"] = c.horizon;
  j["kappa_target"] = c.kappa_target;
  j["kappa_min"] = c.kappa_min;
  j["pairs"] = c.pairs;
  nlohmann::json f = nlohmann::json::array();
  for (const auto& e : c.failures) {
    f.push_back({{"z", to_json(e.z)}, {"x", to_json(e.x)}, {"y", to_json(e.y)},
                 {"kappa", e.kappa}, {"reason", e.reason}});
  }
  j["failures"] = f;
  j["runtime_stats"] = to_json(c.stats);
  return j;
}

nlohmann::json to_json(const LyapunovEstimate& e) {
  nlohmann::json j;
  j["exponents"] = e.exponents;
  j["horizon"] = e.horizon;
  j["k"] = e.k;
  j["lambda_k"] = e.k_exponent;
  j["lambda_k_infimum_norm"] = e.k_exponent_infimum;
  j["k_dispersion"] = e.k_dispersion;
  j["regular_like"] = e.regular_like;
  j["windows"] = e.window_series.size();
  j["runtime_stats"] = to_json(e.stats);
  return j;
}

nlohmann::json to_json(const PseudoOrderWitness& w) {
  return {{"found", w.found},
          {"t1", w.t1},
          {"t2", w.t2},
          {"difference_form", w.difference_form},
          {"membership", to_string(w.membership)}};
}

nlohmann::json to_json(const OmegaClassification& c) {
  nlohmann::json j;
  j["omega_class"] = to_string(c.cls);
  j["contains_equilibrium"] = c.contains_equilibrium;
  j["cloud_size"] = c.cloud_size;
  j["equilibrium_test"] = c.equilibrium_test;
  j["periodic_test"] = c.periodic_test;
  if (c.equilibrium_test) {
    j["equilibrium"] = to_json(c.equilibrium);
    j["equilibrium_residual"] = c.equilibrium_residual;
  }
  if (c.periodic_test) {
    j["period"] = c.period;
    j["period_mismatch"] = c.period_mismatch;
  }
  return j;
}

nlohmann::json to_json(const TrichotomyReport& t) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : t.points) {
    nlohmann::json e = {{"point", to_json(p.point)}, {"ok", p.ok}};
    if (p.ok) {
      e["lambda_k"] = p.lambda_k;
      e["regular_like"] = p.regular_like;
    } else {
      e["error"] = p.error;
    }
    pts.push_back(e);
  }
  return {{"case", to_string(t.result)}, {"lambda_k", t.lambda_k}, {"points", pts}};
}

nlohmann::json to_json(const OrbitReport& r) {
  nlohmann::json j;
  j["x0"] = to_json(r.x0);
  j["bounded"] = r.bounded;
  if (!r.failure.empty()) j["failure"] = r.failure;
  j["pseudo_ordered"] = to_json(r.pseudo_ordered);
  j["omega"] = to_json(r.omega);
  j["omega_diameter"] = r.cloud.diameter;
  j["omega_min_rhs_norm"] = r.cloud.min_rhs_norm;
  j["trichotomy"] = to_json(r.trichotomy);
  j["in_Q"] = r.in_q;
  j["in_CE"] = r.in_ce;
  j["in_QE"] = r.in_qe;
  j["runtime_stats"] = to_json(r.stats);
  return j;
}

std::string trajectory_csv(const TrajectorySegment& traj) {
  std::string out = "t";
  const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
  for (Eigen::Index i = 0; i < n; ++i) out += ",x" + std::to_string(i + 1);
  out += "\n";
  for (std::size_t r = 0; r < traj.size(); ++r) {
    out += format_number(traj.times[r]);
    for (Eigen::Index i = 0; i < n; ++i) out += "," + format_number(traj.states[r](i));
    out += "\n";
  }
  return out;
}

}  // namespace conedyn
