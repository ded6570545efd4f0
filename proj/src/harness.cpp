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

#include "conedyn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "conedyn/errors.hpp"
#include "conedyn/json_io.hpp"
#include "parallel.hpp"

namespace conedyn {

double PbTable::rate() const {
  return subpopulation > 0 ? static_cast<double>(periodic) / static_cast<double>(subpopulation) : 0.0;
}

namespace {

void wilson(std::int64_t hits, std::int64_t total, double& lo, double& hi) {
  if (total <= 0) {
    lo = 0.0;
    hi = 1.0;
    return;
  }
  const double z = 1.959963984540054;
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(hits) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  lo = std::max(0.0, centre - half);
  hi = std::min(1.0, centre + half);
}

ExperimentReport run(const ExperimentConfig& cfg, ExperimentMode mode, int threads) {
  cfg.validate();
  if (mode == ExperimentMode::Pb && cfg.cone_rank != 2) {
    throw ConfigError("pb-experiment requires a cone of rank 2");
  }
  const SemiflowSystem sys = cfg.build();
  const QuadraticCone cone = cfg.cone();
  const int workers = threads >= 0 ? threads : cfg.threads;

  ExperimentReport rep;
  rep.mode = mode;

  MonotoneCheckOptions mo;
  mo.n_pairs = cfg.monotone_pairs;
  mo.seed = stream_seed(cfg.seed, 0x6d6f6e);
  mo.control = cfg.control;
  mo.threads = workers;
  rep.monotone = check_monotone_pairs(sys, cone, cfg.domain, mo);
  rep.monotone_checked = true;
  rep.stats += rep.monotone.stats;
  if (!rep.monotone.positive()) {
    if (!cfg.skip_monotone_check) {
      throw ConfigError("system failed the monotone pair check on the domain (" +
                        std::to_string(rep.monotone.monotone_violations) + " order, " +
                        std::to_string(rep.monotone.strong_violations) +
                        " strong violations); set experiment.skip_monotone_check to proceed");
    }
    rep.warnings.push_back("monotone pair check failed on the domain; continuing because "
                           "skip_monotone_check is set");
  }

  const std::vector<Vec> samples = experiment_samples(cfg);
  const OrbitOptions oo = orbit_options(cfg);
  rep.per_sample.resize(samples.size());
  detail::parallel_for(samples.size(), workers, [&](std::size_t i) {
    OrbitReport r = classify_orbit(sys, cone, samples[i], oo, cfg.tolerances);
    r.cloud.points.clear();
    r.cloud.points.shrink_to_fit();
    r.cloud.times.clear();
    r.cloud.times.shrink_to_fit();
    rep.per_sample[i] = std::move(r);
  });

  bool have_period = false;
  for (std::size_t i = 0; i < rep.per_sample.size(); ++i) {
    const OrbitReport& r = rep.per_sample[i];
    rep.stats += r.stats;
    if (!r.bounded) {
      ++rep.unbounded;
      continue;
    }
    ++rep.bounded;
    if (r.in_q) ++rep.count_q;
    if (r.in_ce) ++rep.count_ce;
    if (r.in_qe) {
      ++rep.count_qe;
    } else if (!r.failure.empty() || r.omega.cls == OmegaClass::Unresolved) {
      ++rep.count_unresolved;
    } else {
      ++rep.count_neither;
    }
    if (mode == ExperimentMode::Pb && r.failure.empty() && r.pseudo_ordered.found &&
        !r.omega.contains_equilibrium) {
      ++rep.pb.subpopulation;
      if (r.omega.cls == OmegaClass::PeriodicOrbit) {
        ++rep.pb.periodic;
        rep.pb.period_min = have_period ? std::min(rep.pb.period_min, r.omega.period) : r.omega.period;
        rep.pb.period_max = have_period ? std::max(rep.pb.period_max, r.omega.period) : r.omega.period;
        have_period = true;
      } else {
        rep.pb.counterexamples.push_back(static_cast<std::int64_t>(i));
      }
    }
  }
  if (rep.bounded > 0) {
    const double b = static_cast<double>(rep.bounded);
    rep.fraction_q = static_cast<double>(rep.count_q) / b;
    rep.fraction_ce = static_cast<double>(rep.count_ce) / b;
    rep.fraction_qe = static_cast<double>(rep.count_qe) / b;
    rep.fraction_unresolved = static_cast<double>(rep.count_unresolved) / b;
    rep.fraction_neither = static_cast<double>(rep.count_neither) / b;
  }
  wilson(rep.count_qe, rep.bounded, rep.qe_lower, rep.qe_upper);
  return rep;
}

}  // namespace

std::vector<Vec> experiment_samples(const ExperimentConfig& cfg) {
  ScrambledSobol sobol(static_cast<int>(cfg.domain.dim()), cfg.seed);
  return sobol.generate(cfg.domain, static_cast<std::size_t>(cfg.n_samples));
}

OrbitOptions orbit_options(const ExperimentConfig& cfg) {
  OrbitOptions oo;
  oo.transient = cfg.transient;
  oo.window = cfg.window;
  oo.control = cfg.control;
  oo.trichotomy.spectrum_budget = cfg.spectrum_budget;
  oo.trichotomy.horizon = cfg.spectrum_horizon;
  oo.trichotomy.window = cfg.spectrum_window;
  oo.trichotomy.control = cfg.control;
  oo.trichotomy.seed = stream_seed(cfg.seed, 0x7472);
  return oo;
}

ExperimentReport run_generic_experiment(const ExperimentConfig& cfg, int threads) {
  return run(cfg, ExperimentMode::Generic, threads);
}

ExperimentReport run_pb_experiment(const ExperimentConfig& cfg, int threads) {
  return run(cfg, ExperimentMode::Pb, threads);
}

std::string report_json(const ExperimentReport& rep, const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["schema"] = "conedyn-report/1";
  j["mode"] = to_string(rep.mode);
  j["disclaimer"] = kGenericityDisclaimer;
  j["config_echo"] = config_to_json(cfg);
  j["monotone_check"] = to_json(rep.monotone);
  j["warnings"] = rep.warnings;
  j["counts"] = {{"samples", rep.per_sample.size()},
                 {"bounded", rep.bounded},
                 {"unbounded_excluded", rep.unbounded},
                 {"Q", rep.count_q},
                 {"CE", rep.count_ce},
                 {"QE", rep.count_qe},
                 {"unresolved", rep.count_unresolved},
                 {"neither", rep.count_neither}};
  j["fraction_Q"] = rep.fraction_q;
  j["fraction_CE"] = rep.fraction_ce;
  j["fraction_QE"] = rep.fraction_qe;
  j["fraction_unresolved"] = rep.fraction_unresolved;
  j["fraction_neither"] = rep.fraction_neither;
  j["fraction_QE_wilson95"] = {rep.qe_lower, rep.qe_upper};
  if (rep.mode == ExperimentMode::Pb) {
    nlohmann::json pb;
    pb["subpopulation"] = rep.pb.subpopulation;
    pb["classified_periodic"] = rep.pb.periodic;
    pb["applicable"] = rep.pb.applicable();
    pb["instance_rate"] = rep.pb.applicable() ? nlohmann::json(rep.pb.rate()) : nlohmann::json(nullptr);
    pb["counterexamples"] = rep.pb.counterexamples;
    if (rep.pb.periodic > 0) pb["period_range"] = {rep.pb.period_min, rep.pb.period_max};
    j["pb_table"] = pb;
  }
  j["runtime_stats"] = to_json(rep.stats);
  nlohmann::json samples = nlohmann::json::array();
  for (std::size_t i = 0; i < rep.per_sample.size(); ++i) {
    nlohmann::json s = to_json(rep.per_sample[i]);
    s["idx"] = i;
    samples.push_back(std::move(s));
  }
  j["per_sample"] = std::move(samples);
  return dump_json(j);
}

std::string report_csv(const ExperimentReport& rep) {
  std::string out = "idx";
  const Eigen::Index n = rep.per_sample.empty() ? 0 : rep.per_sample.front().x0.size();
  for (Eigen::Index i = 0; i < n; ++i) out += ",x0_" + std::to_string(i + 1);
  out += ",pseudo_ordered,omega_class,period,lambda_k,trichotomy,in_QE\n";
  for (std::size_t s = 0; s < rep.per_sample.size(); ++s) {
    const OrbitReport& r = rep.per_sample[s];
    out += std::to_string(s);
    for (Eigen::Index i = 0; i < n; ++i) out += "," + format_number(r.x0(i));
    out += r.pseudo_ordered.found ? ",1," : ",0,";
    out += r.bounded ? to_string(r.omega.cls) : "Unbounded";
    out += "," + (r.omega.periodic_test ? format_number(r.omega.period) : std::string());
    out += "," + format_number(r.trichotomy.lambda_k);
    out += ",";
    out += to_string(r.trichotomy.result);
    out += r.in_qe ? ",1\n" : ",0\n";
  }
  return out;
}

std::string report_summary(const ExperimentReport& rep) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "mode=%s samples=%zu bounded=%lld fraction_QE=%.4f fraction_unresolved=%.4f",
                to_string(rep.mode), rep.per_sample.size(), static_cast<long long>(rep.bounded),
                rep.fraction_qe, rep.fraction_unresolved);
  std::string s = buf;
  if (rep.mode == ExperimentMode::Pb) {
    if (rep.pb.applicable()) {
      std::snprintf(buf, sizeof buf, " pb_subpopulation=%lld pb_rate=%.4f",
                    static_cast<long long>(rep.pb.subpopulation), rep.pb.rate());
    } else {
      std::snprintf(buf, sizeof buf, " pb_subpopulation=0 pb_rate=n/a");
    }
    s += buf;
  }
  return s;
}

}  // namespace conedyn
