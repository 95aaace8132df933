// Copyright 2026 The fluosq Authors
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

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fluosq/approx.hpp"
#include "fluosq/cavity.hpp"
#include "fluosq/detection.hpp"
#include "fluosq/scan.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitPartial = 3;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> params;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> tol;
  std::optional<int> n_cap;
  std::optional<int> workers;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool with_emit) {
  cmd->add_option("--config", args->config_path, "JSON config file")
      ->required();
  cmd->add_option("--param", args->params,
                  "config override, dotted path (e.g. params.rabi=14)");
  cmd->add_option("--tol", args->tol, "solver moment tolerance");
  cmd->add_option("--n-cap", args->n_cap, "truncation cap");
  cmd->add_option("--workers", args->workers,
                  "worker threads (0 = all cores)");
  if (with_emit) {
    cmd->add_option("--out", args->out, "output data file");
    cmd->add_option("--format", args->format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  }
}

fluosq::ScanConfig load(const CommonArgs& args) {
  fluosq::ScanConfig config =
      fluosq::load_config(args.config_path, args.params);
  if (args.out) config.emit.path = *args.out;
  if (args.format) {
    config.emit.format = *args.format == "csv" ? fluosq::EmitFormat::csv
                                               : fluosq::EmitFormat::json;
  }
  if (args.tol) config.solver.tolerance = *args.tol;
  if (args.n_cap) config.solver.n_cap = *args.n_cap;
  if (args.workers) config.workers = *args.workers;
  config.validate();
  if (config.params.cavity_pump_near_saturation()) {
    std::cerr << "warning: p_c > 0.1 kappa, the truncated solve approaches "
                 "cavity pump saturation\n";
  }
  return config;
}

int run_scan_command(const CommonArgs& args) {
  const fluosq::ScanConfig config = load(args);
  const fluosq::ScanResult result = fluosq::run_scan(config);
  if (config.emit.path.empty()) {
    if (config.emit.format == fluosq::EmitFormat::csv) {
      fluosq::emit_csv(result, config, std::cout);
    } else {
      fluosq::emit_json(result, config, std::cout);
    }
  } else {
    fluosq::emit(result, config);
    std::cerr << "wrote " << config.emit.path << " (" << result.rows.size()
              << " rows, " << result.failed << " flagged)\n";
  }
  if (result.failed == 0) return kExitOk;
  if (result.failed == static_cast<int>(result.rows.size())) {
    return kExitNoConvergence;
  }
  return kExitPartial;
}

struct ThresholdArgs {
  std::string axis = "gamma_d";
  double target = 0.0;
  std::vector<double> bracket;
  double rel_tol = 1e-3;
};

int run_threshold_command(const CommonArgs& args, const ThresholdArgs& targs) {
  const fluosq::ScanConfig config = load(args);
  fluosq::ThresholdQuery query;
  query.axis = fluosq::axis_from_string(targs.axis);
  query.target = targs.target;
  query.bracket_lo = targs.bracket.at(0);
  query.bracket_hi = targs.bracket.at(1);
  query.rel_tol = targs.rel_tol;
  const double crossing = fluosq::find_threshold(config, query);
  std::printf("%s = %.12g\n", targs.axis.c_str(), crossing);
  return kExitOk;
}

struct GridSpec {
  double min = 0.0;
  double max = 1.0;
  int points = 21;
};

std::vector<double> linspace(const GridSpec& spec) {
  std::vector<double> values(spec.points);
  const double step =
      spec.points > 1 ? (spec.max - spec.min) / (spec.points - 1) : 0.0;
  for (int i = 0; i < spec.points; ++i) values[i] = spec.min + step * i;
  return values;
}

GridSpec grid_from_json(const nlohmann::json& j, const GridSpec& fallback) {
  GridSpec spec = fallback;
  if (j.contains("min")) spec.min = j["min"].get<double>();
  if (j.contains("max")) spec.max = j["max"].get<double>();
  if (j.contains("points")) spec.points = j["points"].get<int>();
  if (spec.points < 1) throw fluosq::ConfigError("grid points must be >= 1");
  return spec;
}

int run_detect_command(const CommonArgs& args) {
  const fluosq::ScanConfig config = load(args);

  // Detection settings live in the same config file under "detection".
  std::ifstream in(args.config_path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const nlohmann::json root = nlohmann::json::parse(buffer.str());
  double eta = 1.0;
  double classical_variance = 0.0;
  GridSpec intensity_grid{0.01, 2.0, 41};
  GridSpec phase_grid{0.0, std::numbers::pi, 25};
  if (root.contains("detection")) {
    const nlohmann::json& d = root["detection"];
    if (d.contains("eta")) eta = d["eta"].get<double>();
    if (d.contains("classical_variance")) {
      classical_variance = d["classical_variance"].get<double>();
    }
    if (d.contains("lo_intensity")) {
      intensity_grid = grid_from_json(d["lo_intensity"], intensity_grid);
    }
    if (d.contains("lo_phase")) {
      phase_grid = grid_from_json(d["lo_phase"], phase_grid);
    }
  }

  const fluosq::SolveReport report = fluosq::converged_steady_state(
      config.params, config.solver.tolerance, config.solver.n_cap);
  if (!report.converged) {
    std::cerr << "error: solver did not converge (n_used = " << report.n_used
              << ")\n";
    return kExitNoConvergence;
  }

  fluosq::LoGrid grid{linspace(intensity_grid), linspace(phase_grid)};
  const fluosq::LoScanOutcome outcome =
      fluosq::optimal_lo_scan(report.state.qubit(), grid, eta,
                              classical_variance);

  std::printf("excitation = %.12g\n", report.state.qubit().excitation);
  std::printf("variance_at_best_phase = %.12g\n",
              fluosq::variance_at_phase(report.state.qubit(),
                                        outcome.lo_phase));
  std::printf("lo_intensity = %.12g\n", outcome.lo_intensity);
  std::printf("lo_phase = %.12g\n", outcome.lo_phase);
  std::printf("delta_g = %.12g\n", outcome.best.delta_g);
  std::printf("classical_floor = %.12g\n", outcome.best.classical_floor);
  std::printf("margin = %.12g\n", outcome.margin);
  std::printf("detectable = %d\n", outcome.best.detectable ? 1 : 0);
  if (outcome.min_detectable_intensity) {
    std::printf("min_detectable_lo_intensity = %.12g\n",
                *outcome.min_detectable_intensity);
  }
  return kExitOk;
}

int run_dump_command(const CommonArgs& args, int n_max, bool full) {
  const fluosq::ScanConfig config = load(args);
  if (config.emit.path.empty()) {
    throw fluosq::ConfigError("dump-liouvillian needs --out");
  }
  const fluosq::Liouvillian liou =
      fluosq::build_liouvillian(config.params, n_max);
  std::ofstream out(config.emit.path, std::ios::binary);
  if (!out) {
    throw fluosq::ConfigError("cannot open " + config.emit.path);
  }
  if (full) {
    fluosq::write_coordinate_matrix(liou.generator, out);
  } else {
    fluosq::write_coordinate_matrix(liou.coefficients, out);
    std::ofstream rhs(config.emit.path + ".rhs", std::ios::binary);
    if (!rhs) {
      throw fluosq::ConfigError("cannot open " + config.emit.path + ".rhs");
    }
    fluosq::write_coordinate_vector(liou.inhomogeneity, rhs);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady-state squeezing of cavity-assisted resonance "
               "fluorescence"};
  app.require_subcommand(1);

  CommonArgs scan_args;
  CLI::App* scan_cmd =
      app.add_subcommand("scan", "run a parameter sweep from a config file");
  add_common(scan_cmd, &scan_args, true);

  CommonArgs threshold_args;
  ThresholdArgs threshold_extra;
  CLI::App* threshold_cmd = app.add_subcommand(
      "threshold", "bisect an incoherent rate for a variance crossing");
  add_common(threshold_cmd, &threshold_args, false);
  threshold_cmd->add_option("--axis", threshold_extra.axis,
                            "outer parameter (gamma_d, p_x, p_c, rabi)");
  threshold_cmd->add_option("--target", threshold_extra.target,
                            "variance level to cross");
  threshold_cmd
      ->add_option("--bracket", threshold_extra.bracket,
                   "outer-parameter bracket (two values)")
      ->expected(2)
      ->required();
  threshold_cmd->add_option("--rel-tol", threshold_extra.rel_tol,
                            "bisection relative tolerance");

  CommonArgs detect_args;
  CLI::App* detect_cmd = app.add_subcommand(
      "detect", "homodyne cross-correlation detectability of a solved state");
  add_common(detect_cmd, &detect_args, false);

  CommonArgs dump_args;
  int dump_n_max = 8;
  bool dump_full = false;
  CLI::App* dump_cmd = app.add_subcommand(
      "dump-liouvillian", "write the coefficient matrix as coordinate text");
  add_common(dump_cmd, &dump_args, true);
  dump_cmd->add_option("--n-max", dump_n_max, "Fock truncation");
  dump_cmd->add_flag("--full", dump_full,
                     "dump the full singular generator instead of the "
                     "trace-eliminated system");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (scan_cmd->parsed()) return run_scan_command(scan_args);
    if (threshold_cmd->parsed()) {
      return run_threshold_command(threshold_args, threshold_extra);
    }
    if (detect_cmd->parsed()) return run_detect_command(detect_args);
    if (dump_cmd->parsed()) {
      return run_dump_command(dump_args, dump_n_max, dump_full);
    }
  } catch (const fluosq::ConfigError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const fluosq::SolverError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitNoConvergence;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
