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

#include "conedyn/conedyn.h"

#include <cstdio>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "conedyn/classification.hpp"
#include "conedyn/config.hpp"
#include "conedyn/errors.hpp"
#include "conedyn/harness.hpp"
#include "conedyn/json_io.hpp"
#include "conedyn/monotonicity.hpp"
#include "conedyn/splitting.hpp"

struct conedyn_config {
  conedyn::ExperimentConfig cfg;
};

struct conedyn_result {
  std::string json;
  std::string csv;
  std::string summary;
};

struct conedyn_cone {
  conedyn::QuadraticCone cone;
};

namespace {

thread_local std::string g_last_error;

conedyn_status status_of(conedyn::ErrorKind kind) {
  switch (kind) {
    case conedyn::ErrorKind::Input: return CONEDYN_E_INPUT;
    case conedyn::ErrorKind::Config: return CONEDYN_E_CONFIG;
    case conedyn::ErrorKind::Integration: return CONEDYN_E_INTEGRATION;
    case conedyn::ErrorKind::Divergence: return CONEDYN_E_DIVERGENCE;
    case conedyn::ErrorKind::SplittingDegenerate: return CONEDYN_E_SPLITTING;
    case conedyn::ErrorKind::InsufficientData: return CONEDYN_E_INSUFFICIENT_DATA;
    case conedyn::ErrorKind::Io: return CONEDYN_E_IO;
  }
  return CONEDYN_E_INTERNAL;
}

template <typename F>
conedyn_status guarded(F&& fn) {
  g_last_error.clear();
  try {
    fn();
    return CONEDYN_OK;
  } catch (const conedyn::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return CONEDYN_E_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw conedyn::InputError(what);
}

conedyn::Vec start_point(const conedyn::ExperimentConfig& cfg, const double* x0) {
  if (!x0) return cfg.domain.center();
  conedyn::Vec v(cfg.domain.dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = x0[i];
  return v;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

extern "C" {

const char* conedyn_version(void) { return "1.0.0"; }

const char* conedyn_status_name(conedyn_status status) {
  switch (status) {
    case CONEDYN_OK: return "ok";
    case CONEDYN_E_INPUT: return "input_error";
    case CONEDYN_E_CONFIG: return "config_error";
    case CONEDYN_E_INTEGRATION: return "integration_error";
    case CONEDYN_E_DIVERGENCE: return "divergence";
    case CONEDYN_E_SPLITTING: return "splitting_degenerate";
    case CONEDYN_E_INSUFFICIENT_DATA: return "insufficient_data";
    case CONEDYN_E_IO: return "io_error";
    case CONEDYN_E_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* conedyn_last_error(void) { return g_last_error.c_str(); }

conedyn_status conedyn_config_load_file(const char* path, conedyn_config** out) {
  return guarded([&] {
    require(path && out, "config_load_file: null argument");
    *out = nullptr;
    auto h = std::make_unique<conedyn_config>();
    h->cfg = conedyn::load_config(path);
    *out = h.release();
  });
}

conedyn_status conedyn_config_parse(const char* json_text, conedyn_config** out) {
  return guarded([&] {
    require(json_text && out, "config_parse: null argument");
    *out = nullptr;
    auto h = std::make_unique<conedyn_config>();
    h->cfg = conedyn::parse_config(json_text);
    *out = h.release();
  });
}

void conedyn_config_free(conedyn_config* cfg) { delete cfg; }

int conedyn_config_dim(const conedyn_config* cfg) {
  return cfg ? static_cast<int>(cfg->cfg.domain.dim()) : 0;
}

conedyn_status conedyn_config_set_seed(conedyn_config* cfg, uint64_t seed) {
  return guarded([&] {
    require(cfg, "config_set_seed: null config");
    cfg->cfg.seed = seed;
  });
}

conedyn_status conedyn_config_set_samples(conedyn_config* cfg, int64_t n_samples) {
  return guarded([&] {
    require(cfg, "config_set_samples: null config");
    if (n_samples < 1) throw conedyn::ConfigError("sample count must be at least 1");
    cfg->cfg.n_samples = n_samples;
  });
}

conedyn_status conedyn_config_set_threads(conedyn_config* cfg, int threads) {
  return guarded([&] {
    require(cfg, "config_set_threads: null config");
    if (threads < 0) throw conedyn::ConfigError("thread count must be nonnegative");
    cfg->cfg.threads = threads;
  });
}

conedyn_status conedyn_simulate(const conedyn_config* cfg, const double* x0, double t_end,
                                conedyn_result** out) {
  return guarded([&] {
    require(cfg && out, "simulate: null argument");
    *out = nullptr;
    const auto& c = cfg->cfg;
    const conedyn::SemiflowSystem sys = c.build();
    const conedyn::Vec start = start_point(c, x0);
    const conedyn::TrajectorySegment traj = conedyn::integrate(sys, start, t_end, c.control);
    nlohmann::json j;
    j["system"] = sys.name();
    j["x0"] = conedyn::to_json(start);
    j["t_end"] = t_end;
    j["times"] = traj.times;
    nlohmann::json states = nlohmann::json::array();
    for (const auto& s : traj.states) states.push_back(conedyn::to_json(s));
    j["states"] = states;
    j["runtime_stats"] = conedyn::to_json(traj.stats);
    auto r = std::make_unique<conedyn_result>();
    r->json = conedyn::dump_json(j);
    r->csv = conedyn::trajectory_csv(traj);
    r->summary = "simulate: samples=" + std::to_string(traj.size()) +
                 " final_norm=" + fmt("%.6g", traj.states.back().norm());
    *out = r.release();
  });
}

conedyn_status conedyn_lyapunov(const conedyn_config* cfg, const double* x0, double horizon,
                                double window, conedyn_result** out) {
  return guarded([&] {
    require(cfg && out, "lyapunov: null argument");
    *out = nullptr;
    const auto& c = cfg->cfg;
    const conedyn::SemiflowSystem sys = c.build();
    conedyn::LyapunovOptions lo;
    lo.k_plus = sys.dim();
    lo.k = c.cone_rank;
    lo.horizon = horizon;
    lo.window = window;
    lo.control = c.control;
    lo.seed = conedyn::stream_seed(c.seed, 0x6c79);
    const conedyn::Vec start = start_point(c, x0);
    const conedyn::LyapunovEstimate est = conedyn::lyapunov_spectrum(sys, start, lo);
    nlohmann::json j = conedyn::to_json(est);
    j["x0"] = conedyn::to_json(start);
    auto r = std::make_unique<conedyn_result>();
    r->json = conedyn::dump_json(j);
    r->csv = "index,exponent\n";
    for (std::size_t i = 0; i < est.exponents.size(); ++i) {
      r->csv += std::to_string(i + 1) + "," + conedyn::format_number(est.exponents[i]) + "\n";
    }
    r->summary = "lyapunov: lambda_k=" + fmt("%.6g", est.k_exponent) +
                 " regular_like=" + (est.regular_like ? "true" : "false") + " exponents=[";
    for (std::size_t i = 0; i < est.exponents.size(); ++i) {
      r->summary += (i ? "," : "") + fmt("%.6g", est.exponents[i]);
    }
    r->summary += "]";
    *out = r.release();
  });
}

conedyn_status conedyn_monotone_check(const conedyn_config* cfg, int n_pairs, conedyn_result** out) {
  return guarded([&] {
    require(cfg && out, "monotone_check: null argument");
    *out = nullptr;
    const auto& c = cfg->cfg;
    conedyn::MonotoneCheckOptions mo;
    mo.n_pairs = n_pairs > 0 ? n_pairs : c.monotone_pairs;
    mo.seed = c.seed;
    mo.control = c.control;
    mo.threads = c.threads;
    const conedyn::MonotoneVerdict v =
        conedyn::check_monotone_pairs(c.build(), c.cone(), c.domain, mo);
    auto r = std::make_unique<conedyn_result>();
    r->json = conedyn::dump_json(conedyn::to_json(v));
    r->csv = "pairs_tested,monotone_violations,strong_violations,min_interior_margin\n" +
             std::to_string(v.pairs_tested) + "," + std::to_string(v.monotone_violations) + "," +
             std::to_string(v.strong_violations) + "," +
             conedyn::format_number(v.min_interior_margin) + "\n";
    r->summary = std::string("monotone-check: verdict=") + (v.positive() ? "positive" : "negative") +
                 " pairs=" + std::to_string(v.pairs_tested) +
                 " monotone_violations=" + std::to_string(v.monotone_violations) +
                 " strong_violations=" + std::to_string(v.strong_violations);
    *out = r.release();
  });
}

conedyn_status conedyn_focusing_check(const conedyn_config* cfg, const double* points,
                                      size_t n_points, double delta, double horizon, double kappa,
                                      int pairs_per_point, conedyn_result** out) {
  return guarded([&] {
    require(cfg && out && (points || n_points == 0), "focusing_check: null argument");
    *out = nullptr;
    const auto& c = cfg->cfg;
    const Eigen::Index n = c.domain.dim();
    std::vector<conedyn::Vec> sigma;
    for (std::size_t i = 0; i < n_points; ++i) {
      sigma.emplace_back(Eigen::Map<const conedyn::Vec>(points + i * static_cast<std::size_t>(n), n));
    }
    conedyn::FocusingOptions fo;
    fo.delta = delta;
    fo.horizon = horizon;
    fo.kappa_target = kappa;
    fo.pairs_per_point = pairs_per_point;
    fo.seed = c.seed;
    fo.control = c.control;
    fo.threads = c.threads;
    const conedyn::FocusingCertificate cert =
        conedyn::strongly_focusing_check(c.build(), c.cone(), sigma, fo);
    auto r = std::make_unique<conedyn_result>();
    r->json = conedyn::dump_json(conedyn::to_json(cert));
    r->csv = "pairs,kappa_min,failures,positive\n" + std::to_string(cert.pairs) + "," +
             conedyn::format_number(cert.kappa_min) + "," + std::to_string(cert.failures.size()) +
             "," + (cert.positive ? "1" : "0") + "\n";
    r->summary = std::string("focusing-check: certificate=") +
                 (cert.positive ? "positive" : "negative") + " kappa_min=" +
                 fmt("%.6g", cert.kappa_min) + " pairs=" + std::to_string(cert.pairs) +
                 " failures=" + std::to_string(cert.failures.size());
    *out = r.release();
  });
}

conedyn_status conedyn_classify(const conedyn_config* cfg, const double* x0, conedyn_result** out) {
  return guarded([&] {
    require(cfg && out, "classify: null argument");
    *out = nullptr;
    const auto& c = cfg->cfg;
    const conedyn::Vec start = start_point(c, x0);
    const conedyn::OrbitReport rep = conedyn::classify_orbit(
        c.build(), c.cone(), start, conedyn::orbit_options(c), c.tolerances);
    auto r = std::make_unique<conedyn_result>();
    r->json = conedyn::dump_json(conedyn::to_json(rep));
    r->csv = "pseudo_ordered,omega_class,period,lambda_k,trichotomy,in_QE\n";
    r->csv += std::string(rep.pseudo_ordered.found ? "1," : "0,") + conedyn::to_string(rep.omega.cls) +
              "," + (rep.omega.periodic_test ? conedyn::format_number(rep.omega.period) : "") + "," +
              conedyn::format_number(rep.trichotomy.lambda_k) + "," +
              conedyn::to_string(rep.trichotomy.result) + (rep.in_qe ? ",1\n" : ",0\n");
    r->summary = std::string("omega_class=") +
                 (rep.bounded ? conedyn::to_string(rep.omega.cls) : "Unbounded");
    if (rep.omega.periodic_test) r->summary += " period=" + fmt("%.6f", rep.omega.period);
    r->summary += std::string(" pseudo_ordered=") + (rep.pseudo_ordered.found ? "true" : "false") +
                  " lambda_k=" + fmt("%.4g", rep.trichotomy.lambda_k) +
                  " trichotomy=" + conedyn::to_string(rep.trichotomy.result) +
                  " in_QE=" + (rep.in_qe ? "true" : "false");
    if (!rep.failure.empty()) r->summary += " failure=\"" + rep.failure + "\"";
    *out = r.release();
  });
}

conedyn_status conedyn_run_experiment(const conedyn_config* cfg, conedyn_mode mode,
                                      conedyn_result** out) {
  return guarded([&] {
    require(cfg && out, "run_experiment: null argument");
    *out = nullptr;
    conedyn::ExperimentConfig c = cfg->cfg;
    if (mode == CONEDYN_MODE_GENERIC) c.mode = conedyn::ExperimentMode::Generic;
    if (mode == CONEDYN_MODE_PB) c.mode = conedyn::ExperimentMode::Pb;
    const conedyn::ExperimentReport rep = c.mode == conedyn::ExperimentMode::Pb
                                              ? conedyn::run_pb_experiment(c)
                                              : conedyn::run_generic_experiment(c);
    auto r = std::make_unique<conedyn_result>();
    r->json = conedyn::report_json(rep, c);
    r->csv = conedyn::report_csv(rep);
    r->summary = conedyn::report_summary(rep);
    *out = r.release();
  });
}

const char* conedyn_result_json(const conedyn_result* res) { return res ? res->json.c_str() : ""; }
const char* conedyn_result_csv(const conedyn_result* res) { return res ? res->csv.c_str() : ""; }
const char* conedyn_result_summary(const conedyn_result* res) {
  return res ? res->summary.c_str() : "";
}

conedyn_status conedyn_result_write(const conedyn_result* res, const char* path, const char* format) {
  return guarded([&] {
    require(res && path && format, "result_write: null argument");
    const std::string f = format;
    if (f == "json") {
      conedyn::write_file_atomic(path, res->json);
    } else if (f == "csv") {
      conedyn::write_file_atomic(path, res->csv);
    } else {
      throw conedyn::InputError("unknown output format '" + f + "' (json or csv)");
    }
  });
}

void conedyn_result_free(conedyn_result* res) { delete res; }

conedyn_status conedyn_cone_create(const double* q, int n, int k, conedyn_cone** out) {
  return guarded([&] {
    require(q && out && n > 0, "cone_create: null argument or bad size");
    *out = nullptr;
    conedyn::Mat m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = q[i * n + j];
    }
    *out = new conedyn_cone{conedyn::QuadraticCone(m, k)};
  });
}

void conedyn_cone_free(conedyn_cone* cone) { delete cone; }

conedyn_status conedyn_cone_membership(const conedyn_cone* cone, const double* v, int* cls,
                                       double* form) {
  return guarded([&] {
    require(cone && v && cls, "cone_membership: null argument");
    const int n = cone->cone.dim();
    const conedyn::ConeMembership m = cone->cone.membership(Eigen::Map<const conedyn::Vec>(v, n));
    *cls = static_cast<int>(m.cls);
    if (form) *form = m.normalized_form;
  });
}

conedyn_status conedyn_cone_distance(const conedyn_cone* cone, const double* unit_v, double* out) {
  return guarded([&] {
    require(cone && unit_v && out, "cone_distance: null argument");
    const int n = cone->cone.dim();
    *out = cone->cone.distance_to_complement(Eigen::Map<const conedyn::Vec>(unit_v, n));
  });
}

conedyn_status conedyn_cone_separation_index(const conedyn_cone* cone, const double* r,
                                             double* kappa) {
  return guarded([&] {
    require(cone && r && kappa, "cone_separation_index: null argument");
    const int n = cone->cone.dim();
    conedyn::Mat m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = r[i * n + j];
    }
    *kappa = cone->cone.separation_index(m).kappa;
  });
}

}  // extern "C"
