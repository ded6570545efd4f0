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

#include "conedyn/config.hpp"

#include <set>

#include "conedyn/errors.hpp"
#include "conedyn/json_io.hpp"

namespace conedyn {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

std::int64_t get_integer(const json& obj, const char* key, std::int64_t fallback,
                         const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return v.get<std::int64_t>();
}

Vec get_vector(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + " must be a non-empty array");
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(where + " entries must be numbers");
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

Mat get_matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + " must be a non-empty array of rows");
  const std::size_t rows = v.size();
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  if (cols == 0) throw ConfigError(where + " rows must be non-empty arrays");
  Mat out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) throw ConfigError(where + " is ragged");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!v[i][j].is_number()) throw ConfigError(where + " entries must be numbers");
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[i][j].get<double>();
    }
  }
  return out;
}

IntegratorMethod parse_method(const std::string& s) {
  if (s == "rk45" || s == "rk45_adaptive") return IntegratorMethod::Rk45Adaptive;
  if (s == "rk4" || s == "rk4_fixed") return IntegratorMethod::Rk4Fixed;
  throw ConfigError("integrator.method must be 'rk45' or 'rk4'");
}

}  // namespace

const char* to_string(ExperimentMode m) {
  return m == ExperimentMode::Pb ? "pb" : "generic";
}

void ExperimentConfig::validate() const {
  try {
    const SemiflowSystem sys = build();
    const QuadraticCone c = cone();
    if (c.dim() != sys.dim()) throw ConfigError("cone dimension differs from the system dimension");
    if (domain.dim() != sys.dim()) throw ConfigError("domain dimension differs from the system dimension");
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  domain.validate();
  tolerances.validate();
  if (n_samples < 1) throw ConfigError("experiment.n_samples must be at least 1");
  if (!(transient > 0.0) || !(window > 0.0)) {
    throw ConfigError("experiment.transient and experiment.window must be positive");
  }
  if (monotone_pairs < 1) throw ConfigError("experiment.monotone_pairs must be at least 1");
  if (!(control.rtol > 0.0) || !(control.atol > 0.0) || !(control.stride > 0.0) ||
      !(control.step > 0.0)) {
    throw ConfigError("integrator tolerances, stride and step must be positive");
  }
  if (spectrum_budget < 1 || !(spectrum_window > 0.0) ||
      !(spectrum_horizon >= 10.0 * spectrum_window)) {
    throw ConfigError("spectrum: need budget >= 1, window > 0 and horizon >= 10 window");
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(doc, {"schema", "system", "cone", "domain", "integrator", "experiment", "tolerances",
                   "spectrum"},
             "config");
  if (!doc.contains("schema") || doc["schema"] != kConfigSchema) {
    throw ConfigError(std::string("config.schema must be \"") + kConfigSchema + "\"");
  }
  for (const char* req : {"system", "cone", "domain"}) {
    if (!doc.contains(req)) throw ConfigError(std::string("config is missing '") + req + "'");
  }

  ExperimentConfig cfg;
  try {
    const json& sys = doc["system"];
    check_keys(sys, {"name", "params", "A"}, "system");
    if (!sys.contains("name") || !sys["name"].is_string()) throw ConfigError("system.name must be a string");
    cfg.system.name = sys["name"].get<std::string>();
    if (sys.contains("params")) {
      const json& p = sys["params"];
      if (!p.is_object()) throw ConfigError("system.params must be an object");
      for (auto it = p.begin(); it != p.end(); ++it) {
        if (!it.value().is_number()) throw ConfigError("system.params." + it.key() + " must be a number");
        cfg.system.params[it.key()] = it.value().get<double>();
      }
    }
    if (sys.contains("A")) cfg.system.matrix = get_matrix(sys["A"], "system.A");

    const json& cone = doc["cone"];
    check_keys(cone, {"Q", "rank"}, "cone");
    if (!cone.contains("Q") || !cone.contains("rank")) throw ConfigError("cone needs Q and rank");
    cfg.cone_q = get_matrix(cone["Q"], "cone.Q");
    cfg.cone_rank = static_cast<int>(get_integer(cone, "rank", 0, "cone"));

    const json& dom = doc["domain"];
    check_keys(dom, {"lower", "upper"}, "domain");
    if (!dom.contains("lower") || !dom.contains("upper")) throw ConfigError("domain needs lower and upper");
    cfg.domain.lower = get_vector(dom["lower"], "domain.lower");
    cfg.domain.upper = get_vector(dom["upper"], "domain.upper");

    if (doc.contains("integrator")) {
      const json& in = doc["integrator"];
      check_keys(in, {"method", "rtol", "atol", "stride", "step", "max_steps", "divergence_bound"},
                 "integrator");
      if (in.contains("method")) {
        if (!in["method"].is_string()) throw ConfigError("integrator.method must be a string");
        cfg.control.method = parse_method(in["method"].get<std::string>());
      }
      cfg.control.rtol = get_number(in, "rtol", cfg.control.rtol, "integrator");
      cfg.control.atol = get_number(in, "atol", cfg.control.atol, "integrator");
      cfg.control.stride = get_number(in, "stride", 0.05, "integrator");
      cfg.control.step = get_number(in, "step", cfg.control.step, "integrator");
      const std::int64_t ms = get_integer(in, "max_steps", static_cast<std::int64_t>(cfg.control.max_steps),
                                          "integrator");
      if (ms < 1) throw ConfigError("integrator.max_steps must be positive");
      cfg.control.max_steps = static_cast<std::uint64_t>(ms);
      cfg.control.divergence_bound =
          get_number(in, "divergence_bound", cfg.control.divergence_bound, "integrator");
    } else {
      cfg.control.stride = 0.05;
    }

    if (doc.contains("experiment")) {
      const json& ex = doc["experiment"];
      check_keys(ex, {"mode", "n_samples", "seed", "transient", "window", "skip_monotone_check",
                      "monotone_pairs", "threads"},
                 "experiment");
      if (ex.contains("mode")) {
        const std::string m = ex["mode"].is_string() ? ex["mode"].get<std::string>() : "";
        if (m == "generic") cfg.mode = ExperimentMode::Generic;
        else if (m == "pb") cfg.mode = ExperimentMode::Pb;
        else throw ConfigError("experiment.mode must be 'generic' or 'pb'");
      }
      cfg.n_samples = get_integer(ex, "n_samples", cfg.n_samples, "experiment");
      const std::int64_t seed = get_integer(ex, "seed", 1, "experiment");
      if (seed < 0) throw ConfigError("experiment.seed must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(seed);
      cfg.transient = get_number(ex, "transient", cfg.transient, "experiment");
      cfg.window = get_number(ex, "window", cfg.window, "experiment");
      if (ex.contains("skip_monotone_check")) {
        if (!ex["skip_monotone_check"].is_boolean()) {
          throw ConfigError("experiment.skip_monotone_check must be a boolean");
        }
        cfg.skip_monotone_check = ex["skip_monotone_check"].get<bool>();
      }
      cfg.monotone_pairs = static_cast<int>(get_integer(ex, "monotone_pairs", cfg.monotone_pairs, "experiment"));
      cfg.threads = static_cast<int>(get_integer(ex, "threads", 0, "experiment"));
    }

    if (doc.contains("tolerances")) {
      const json& t = doc["tolerances"];
      check_keys(t, {"sep_tol", "eq_diam_tol", "eq_rhs_tol", "per_tol", "t_min", "trich_tol",
                     "inst_tol", "dich_tol", "colim_tol"},
                 "tolerances");
      auto& tol = cfg.tolerances;
      tol.sep_tol = get_number(t, "sep_tol", tol.sep_tol, "tolerances");
      tol.eq_diam_tol = get_number(t, "eq_diam_tol", tol.eq_diam_tol, "tolerances");
      tol.eq_rhs_tol = get_number(t, "eq_rhs_tol", tol.eq_rhs_tol, "tolerances");
      tol.per_tol = get_number(t, "per_tol", tol.per_tol, "tolerances");
      tol.t_min = get_number(t, "t_min", tol.t_min, "tolerances");
      tol.trich_tol = get_number(t, "trich_tol", tol.trich_tol, "tolerances");
      tol.inst_tol = get_number(t, "inst_tol", tol.inst_tol, "tolerances");
      tol.dich_tol = get_number(t, "dich_tol", tol.dich_tol, "tolerances");
      tol.colim_tol = get_number(t, "colim_tol", tol.colim_tol, "tolerances");
    }

    if (doc.contains("spectrum")) {
      const json& s = doc["spectrum"];
      check_keys(s, {"budget", "horizon", "window"}, "spectrum");
      cfg.spectrum_budget = static_cast<int>(get_integer(s, "budget", cfg.spectrum_budget, "spectrum"));
      cfg.spectrum_horizon = get_number(s, "horizon", cfg.spectrum_horizon, "spectrum");
      cfg.spectrum_window = get_number(s, "window", cfg.spectrum_window, "spectrum");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError&) {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  try {
    return parse_config(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  json sys = {{"name", cfg.system.name}};
  json params = json::object();
  for (const auto& [k, v] : cfg.system.params) params[k] = v;
  sys["params"] = params;
  if (cfg.system.matrix) sys["A"] = to_json(*cfg.system.matrix);
  const auto& t = cfg.tolerances;
  return {
      {"schema", kConfigSchema},
      {"system", sys},
      {"cone", {{"Q", to_json(cfg.cone_q)}, {"rank", cfg.cone_rank}}},
      {"domain", {{"lower", to_json(cfg.domain.lower)}, {"upper", to_json(cfg.domain.upper)}}},
      {"integrator",
       {{"method", cfg.control.method == IntegratorMethod::Rk4Fixed ? "rk4" : "rk45"},
        {"rtol", cfg.control.rtol},
        {"atol", cfg.control.atol},
        {"stride", cfg.control.stride},
        {"step", cfg.control.step},
        {"max_steps", cfg.control.max_steps},
        {"divergence_bound", cfg.control.divergence_bound}}},
      {"experiment",
       {{"mode", to_string(cfg.mode)},
        {"n_samples", cfg.n_samples},
        {"seed", cfg.seed},
        {"transient", cfg.transient},
        {"window", cfg.window},
        {"skip_monotone_check", cfg.skip_monotone_check},
        {"monotone_pairs", cfg.monotone_pairs}}},
      {"tolerances",
       {{"sep_tol", t.sep_tol},
        {"eq_diam_tol", t.eq_diam_tol},
        {"eq_rhs_tol", t.eq_rhs_tol},
        {"per_tol", t.per_tol},
        {"t_min", t.t_min},
        {"trich_tol", t.trich_tol},
        {"inst_tol", t.inst_tol},
        {"dich_tol", t.dich_tol},
        {"colim_tol", t.colim_tol}}},
      {"spectrum",
       {{"budget", cfg.spectrum_budget},
        {"horizon", cfg.spectrum_horizon},
        {"window", cfg.spectrum_window}}},
  };
}

}  // namespace conedyn
