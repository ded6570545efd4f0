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

// Command-line front end. Talks to the library only through conedyn.h.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "conedyn/conedyn.h"

namespace {

struct Common {
  std::string config;
  int64_t seed = -1;
  int64_t samples = -1;
  int threads = -1;
  std::string out;
  std::string format = "json";
};

struct Extra {
  std::vector<double> x0;
  double t_end = 20.0;
  double horizon = -1.0;
  double window = 1.0;
  int pairs = 0;
  std::string sigma;
  double delta = 0.05;
  double kappa = 1e-3;
  int pairs_per_point = 4;
};

int exit_code(conedyn_status s) {
  switch (s) {
    case CONEDYN_OK: return 0;
    case CONEDYN_E_INPUT:
    case CONEDYN_E_CONFIG:
    case CONEDYN_E_IO: return 1;
    default: return 2;
  }
}

int fail(conedyn_status s) {
  std::cerr << "conedyn: " << conedyn_status_name(s) << ": " << conedyn_last_error() << "\n";
  return exit_code(s);
}

bool read_sigma(const std::string& path, std::size_t dim, std::vector<double>& flat, std::string& err) {
  std::ifstream is(path);
  if (!is) {
    err = "cannot read point file '" + path + "'";
    return false;
  }
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (lineno == 1) continue;  // header
      err = path + ":" + std::to_string(lineno) + ": non-numeric cell";
      return false;
    }
    if (row.size() != dim) {
      err = path + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim) + " values";
      return false;
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  if (flat.empty()) {
    err = "point file '" + path + "' has no points";
    return false;
  }
  return true;
}

int run(const std::string& cmd, const Common& c, const Extra& e) {
  const auto started = std::chrono::steady_clock::now();
  conedyn_config* cfg = nullptr;
  conedyn_status st = conedyn_config_load_file(c.config.c_str(), &cfg);
  if (st != CONEDYN_OK) return fail(st);
  std::unique_ptr<conedyn_config, void (*)(conedyn_config*)> cfg_guard(cfg, conedyn_config_free);
  if (c.seed >= 0 && (st = conedyn_config_set_seed(cfg, static_cast<uint64_t>(c.seed))) != CONEDYN_OK) {
    return fail(st);
  }
  if (c.samples >= 0 && (st = conedyn_config_set_samples(cfg, c.samples)) != CONEDYN_OK) return fail(st);
  if (c.threads >= 0 && (st = conedyn_config_set_threads(cfg, c.threads)) != CONEDYN_OK) return fail(st);

  const std::size_t dim = static_cast<std::size_t>(conedyn_config_dim(cfg));
  const double* x0 = nullptr;
  if (!e.x0.empty()) {
    if (e.x0.size() != dim) {
      std::cerr << "conedyn: --x0 needs " << dim << " comma-separated values\n";
      return 1;
    }
    x0 = e.x0.data();
  }

  conedyn_result* res = nullptr;
  if (cmd == "simulate") {
    st = conedyn_simulate(cfg, x0, e.t_end, &res);
  } else if (cmd == "lyapunov") {
    st = conedyn_lyapunov(cfg, x0, e.horizon > 0 ? e.horizon : 200.0, e.window, &res);
  } else if (cmd == "monotone-check") {
    st = conedyn_monotone_check(cfg, e.pairs, &res);
  } else if (cmd == "focusing-check") {
    std::vector<double> flat;
    std::string err;
    if (!read_sigma(e.sigma, dim, flat, err)) {
      std::cerr << "conedyn: " << err << "\n";
      return 1;
    }
    st = conedyn_focusing_check(cfg, flat.data(), flat.size() / dim, e.delta,
                                e.horizon > 0 ? e.horizon : 1.0, e.kappa, e.pairs_per_point, &res);
  } else if (cmd == "classify") {
    st = conedyn_classify(cfg, x0, &res);
  } else if (cmd == "experiment") {
    st = conedyn_run_experiment(cfg, CONEDYN_MODE_GENERIC, &res);
  } else {
    st = conedyn_run_experiment(cfg, CONEDYN_MODE_PB, &res);
  }
  if (st != CONEDYN_OK) return fail(st);
  std::unique_ptr<conedyn_result, void (*)(conedyn_result*)> res_guard(res, conedyn_result_free);

  if (!c.out.empty()) {
    st = conedyn_result_write(res, c.out.c_str(), c.format.c_str());
    if (st != CONEDYN_OK) return fail(st);
  } else {
    std::cout << (c.format == "csv" ? conedyn_result_csv(res) : conedyn_result_json(res));
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::printf("%s wall_s=%.3f\n", conedyn_result_summary(res), wall);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conedyn: monotone semiflows with respect to quadratic rank-k cones"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(conedyn_version()));

  Common common;
  Extra extra;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Configuration file (conedyn-config/1)")->required();
    sub->add_option("--seed", common.seed, "Override the configured seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--samples", common.samples, "Override the configured sample count");
    sub->add_option("--threads", common.threads, "Worker threads (0: all)")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", common.out, "Output file (written atomically)");
    sub->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  auto* simulate = app.add_subcommand("simulate", "Integrate one trajectory");
  add_common(simulate);
  simulate->add_option("--x0", extra.x0, "Initial point, comma separated")->delimiter(',');
  simulate->add_option("--t-end", extra.t_end, "Final time");

  auto* lyap = app.add_subcommand("lyapunov", "Finite-time Lyapunov spectrum");
  add_common(lyap);
  lyap->add_option("--x0", extra.x0, "Initial point, comma separated")->delimiter(',');
  lyap->add_option("--horizon", extra.horizon, "Horizon (default 200)");
  lyap->add_option("--window", extra.window, "Renormalization window");

  auto* mono = app.add_subcommand("monotone-check", "Ordered-pair propagation test");
  add_common(mono);
  mono->add_option("--pairs", extra.pairs, "Number of pairs (default: config)");

  auto* focus = app.add_subcommand("focusing-check", "Separation index of averaged Jacobians");
  add_common(focus);
  focus->add_option("--sigma", extra.sigma, "CSV of points (one per row)")->required();
  focus->add_option("--delta", extra.delta, "Pair radius");
  focus->add_option("--horizon", extra.horizon, "Flow time T");
  focus->add_option("--kappa", extra.kappa, "Target separation index");
  focus->add_option("--pairs-per-point", extra.pairs_per_point, "Pairs per point");

  auto* classify = app.add_subcommand("classify", "Classify one orbit");
  add_common(classify);
  classify->add_option("--x0", extra.x0, "Initial point, comma separated")->delimiter(',');

  auto* experiment = app.add_subcommand("experiment", "Genericity experiment over the domain");
  add_common(experiment);
  auto* pb = app.add_subcommand("pb-experiment", "Periodic-orbit instance experiment (rank 2)");
  add_common(pb);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  for (auto* sub : app.get_subcommands()) {
    return run(sub->get_name(), common, extra);
  }
  return 1;
}
