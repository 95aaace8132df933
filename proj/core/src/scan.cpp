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

#include "fluosq/scan.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "fluosq/approx.hpp"
#include "fluosq/cavity.hpp"
#include "fluosq/freespace.hpp"
#include "fluosq/observables.hpp"

namespace fluosq {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

using ordered_json = nlohmann::ordered_json;

// Fills `slots` by dispatching evaluate(i) for i in [0, count) to a pool.
// Each slot is written by exactly one worker; order is by index, so the
// result is independent of scheduling.
void parallel_for(int count, int workers,
                  const std::function<void(int)>& evaluate) {
  if (count <= 0) return;
  int pool_size = workers > 0
                      ? workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  pool_size = std::clamp(pool_size, 1, count);
  if (pool_size == 1) {
    for (int i = 0; i < count; ++i) evaluate(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(pool_size);
  for (int w = 0; w < pool_size; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        evaluate(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

Scenario pick_scenario(const SystemParams& p) {
  const int active = (p.gamma_d > 0.0 ? 1 : 0) + (p.p_x > 0.0 ? 1 : 0) +
                     (p.p_c > 0.0 ? 1 : 0);
  if (active != 1) return Scenario::base;  // combined channels: no chain
  if (p.gamma_d > 0.0) return Scenario::dephasing;
  if (p.p_x > 0.0) return Scenario::spe_pump;
  return Scenario::cavity_pump;
}

ScanRow evaluate_point(const ScanConfig& config, double axis_value) {
  ScanRow row;
  row.axis_value = axis_value;
  row.excitation = row.coherence_sq = row.purity = kNan;
  row.var_min = row.var_max = row.n_cav = kNan;
  row.r_raw = row.r_effective = kNan;
  row.approx_excitation = row.approx_coherence_sq = row.approx_var_min = kNan;
  row.fs_excitation = row.fs_coherence_sq = kNan;
  row.fs_purity = row.fs_var_min = kNan;
  row.residual = kNan;

  SystemParams p = config.params;
  set_axis_value(p, config.axis, axis_value);
  try {
    p.validate();
  } catch (const std::invalid_argument&) {
    return row;  // flagged
  }

  // Free-space closed forms never fail on valid parameters.
  const QubitState fs = steady_state(p.free_space());
  const SqueezingReport fs_report = optimize_phase(fs);
  row.fs_excitation = fs.excitation;
  row.fs_coherence_sq = std::norm(fs.coherence);
  row.fs_purity = fs_report.purity;
  row.fs_var_min = fs_report.var_min;

  SolveReport solve;
  try {
    solve = converged_steady_state(p, config.solver.tolerance,
                                   config.solver.n_cap);
  } catch (const SolverError&) {
    return row;
  }
  row.n_used = solve.n_used;
  row.residual = solve.residual;
  if (!solve.converged) return row;

  const QubitState qubit = solve.state.qubit();
  const SqueezingReport report = optimize_phase(qubit);
  row.ok = true;
  row.excitation = qubit.excitation;
  row.coherence_sq = std::norm(qubit.coherence);
  row.purity = report.purity;
  row.var_min = report.var_min;
  row.var_max = report.var_max;
  row.n_cav = solve.state.photon_number;

  const Scenario scenario = pick_scenario(p);
  const PurificationRate rate =
      purification_rate(p, solve.state.photon_number, scenario);
  row.r_raw = rate.raw;
  row.r_effective = rate.effective;
  const ApproxMoments approx = approx_moments(p, rate.effective, scenario);
  row.approx_excitation = approx.state.excitation;
  row.approx_coherence_sq = std::norm(approx.state.coherence);
  row.approx_var_min = approx_variance(p, rate.effective, scenario);
  return row;
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

// RFC-style CSV escaping; the fixed column set never needs it, but the
// writer stays general.
std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char ch : field) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

double column_value(const ScanRow& row, const std::string& name) {
  if (name == "excitation") return row.excitation;
  if (name == "coherence_sq") return row.coherence_sq;
  if (name == "purity") return row.purity;
  if (name == "var_min") return row.var_min;
  if (name == "var_max") return row.var_max;
  if (name == "n_cav") return row.n_cav;
  if (name == "r_raw") return row.r_raw;
  if (name == "r_effective") return row.r_effective;
  if (name == "approx_excitation") return row.approx_excitation;
  if (name == "approx_coherence_sq") return row.approx_coherence_sq;
  if (name == "approx_var_min") return row.approx_var_min;
  if (name == "fs_excitation") return row.fs_excitation;
  if (name == "fs_coherence_sq") return row.fs_coherence_sq;
  if (name == "fs_purity") return row.fs_purity;
  if (name == "fs_var_min") return row.fs_var_min;
  if (name == "n_used") return row.n_used;
  if (name == "residual") return row.residual;
  throw ConfigError("unknown observable column: " + name);
}

std::vector<std::string> selected_columns(const ScanConfig& config) {
  if (config.outputs.empty()) return scan_column_names();
  return config.outputs;
}

ordered_json config_echo(const ScanConfig& config) {
  const SystemParams& p = config.params;
  ordered_json j;
  j["units"] = config.units;
  j["params"] = {{"gamma", p.gamma},     {"gamma_d", p.gamma_d},
                 {"p_x", p.p_x},         {"p_c", p.p_c},
                 {"kappa", p.kappa},     {"g", p.g},
                 {"rabi", p.rabi},       {"delta_x", p.delta_x},
                 {"delta_c", p.delta_c}};
  j["sweep"] = {{"axis", to_string(config.axis)},
                {"min", config.axis_min},
                {"max", config.axis_max},
                {"points", config.points}};
  j["solver"] = {{"tolerance", config.solver.tolerance},
                 {"n_cap", config.solver.n_cap}};
  j["emit"] = {{"format", config.emit.format == EmitFormat::csv ? "csv" : "json"},
               {"path", config.emit.path}};
  if (!config.outputs.empty()) j["outputs"] = config.outputs;
  return j;
}

}  // namespace

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::delta_x: return "delta_x";
    case SweepAxis::gamma_d: return "gamma_d";
    case SweepAxis::p_x: return "p_x";
    case SweepAxis::p_c: return "p_c";
    case SweepAxis::rabi: return "rabi";
  }
  return "?";
}

SweepAxis axis_from_string(const std::string& name) {
  if (name == "delta_x") return SweepAxis::delta_x;
  if (name == "gamma_d") return SweepAxis::gamma_d;
  if (name == "p_x") return SweepAxis::p_x;
  if (name == "p_c") return SweepAxis::p_c;
  if (name == "rabi") return SweepAxis::rabi;
  throw ConfigError("unknown sweep axis: " + name);
}

void set_axis_value(SystemParams& p, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::delta_x: p.delta_x = value; return;
    case SweepAxis::gamma_d: p.gamma_d = value; return;
    case SweepAxis::p_x: p.p_x = value; return;
    case SweepAxis::p_c: p.p_c = value; return;
    case SweepAxis::rabi: p.rabi = value; return;
  }
}

double get_axis_value(const SystemParams& p, SweepAxis axis) {
  switch (axis) {
    case SweepAxis::delta_x: return p.delta_x;
    case SweepAxis::gamma_d: return p.gamma_d;
    case SweepAxis::p_x: return p.p_x;
    case SweepAxis::p_c: return p.p_c;
    case SweepAxis::rabi: return p.rabi;
  }
  return 0.0;
}

void ScanConfig::validate() const {
  // The swept field is checked at the grid start; later grid points may
  // leave the valid region and become flagged rows instead of an abort.
  SystemParams probe = params;
  set_axis_value(probe, axis, axis_min);
  try {
    probe.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("invalid params: ") + err.what());
  }
  if (!std::isfinite(axis_min) || !std::isfinite(axis_max)) {
    throw ConfigError("sweep range must be finite");
  }
  if (points < 2) throw ConfigError("sweep needs at least 2 points");
  if (!(solver.tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
  if (solver.n_cap < 1) throw ConfigError("n_cap must be >= 1");
  if (units != "g" && units != "gamma") {
    throw ConfigError("units must be \"g\" or \"gamma\"");
  }
  if (workers < 0) throw ConfigError("workers must be >= 0");
  for (const auto& name : outputs) column_value(ScanRow{}, name);
}

const std::vector<std::string>& scan_column_names() {
  static const std::vector<std::string> names = {
      "excitation",        "coherence_sq",
      "purity",            "var_min",
      "var_max",           "n_cav",
      "r_raw",             "r_effective",
      "approx_excitation", "approx_coherence_sq",
      "approx_var_min",    "fs_excitation",
      "fs_coherence_sq",   "fs_purity",
      "fs_var_min",        "n_used",
      "residual"};
  return names;
}

ScanResult run_scan(const ScanConfig& config) {
  config.validate();
  const int n = config.points;
  ScanResult result;
  result.rows.resize(n);
  const double step =
      n > 1 ? (config.axis_max - config.axis_min) / (n - 1) : 0.0;
  parallel_for(n, config.workers, [&](int i) {
    result.rows[i] = evaluate_point(config, config.axis_min + step * i);
  });
  for (const ScanRow& row : result.rows) {
    if (!row.ok) ++result.failed;
  }
  return result;
}

void emit_csv(const ScanResult& result, const ScanConfig& config,
              std::ostream& out) {
  const auto columns = selected_columns(config);
  out << csv_escape(to_string(config.axis));
  for (const auto& name : columns) out << ',' << csv_escape(name);
  out << ",ok\n";
  for (const ScanRow& row : result.rows) {
    out << format_number(row.axis_value);
    for (const auto& name : columns) {
      out << ',' << format_number(column_value(row, name));
    }
    out << ',' << (row.ok ? 1 : 0) << '\n';
  }
}

void emit_json(const ScanResult& result, const ScanConfig& config,
               std::ostream& out) {
  const auto columns = selected_columns(config);
  ordered_json rows = ordered_json::array();
  for (const ScanRow& row : result.rows) {
    ordered_json item;
    item[to_string(config.axis)] = row.axis_value;
    for (const auto& name : columns) {
      const double value = column_value(row, name);
      if (std::isfinite(value)) {
        item[name] = value;
      } else {
        item[name] = nullptr;
      }
    }
    item["ok"] = row.ok;
    rows.push_back(std::move(item));
  }
  out << rows.dump(2) << '\n';
}

void emit(const ScanResult& result, const ScanConfig& config) {
  if (config.emit.path.empty()) {
    throw ConfigError("emit: no output path configured");
  }
  std::ofstream out(config.emit.path, std::ios::binary);
  if (!out) throw ConfigError("emit: cannot open " + config.emit.path);
  if (config.emit.format == EmitFormat::csv) {
    emit_csv(result, config, out);
  } else {
    emit_json(result, config, out);
  }
  out.close();
  if (!out) throw ConfigError("emit: write failed for " + config.emit.path);

  ordered_json meta;
  meta["config"] = config_echo(config);
  meta["rows"] = result.rows.size();
  meta["failed"] = result.failed;
  std::ofstream side(config.emit.path + ".meta.json", std::ios::binary);
  if (!side) {
    throw ConfigError("emit: cannot open " + config.emit.path + ".meta.json");
  }
  side << meta.dump(2) << '\n';
}

DipResult locate_variance_dip(const SystemParams& p,
                              const SolverSettings& solver, int points,
                              double half_width_g, int workers) {
  p.validate();
  if (points < 3) throw ConfigError("locate_variance_dip: points must be >= 3");
  const double center = cavity_resonance_detuning(p);
  const double half = half_width_g * p.g;

  auto sweep = [&](double lo, double hi) {
    std::vector<double> variances(points,
                                  std::numeric_limits<double>::infinity());
    const double step = (hi - lo) / (points - 1);
    parallel_for(points, workers, [&](int i) {
      SystemParams q = p;
      q.delta_x = lo + step * i;
      try {
        const SolveReport report =
            converged_steady_state(q, solver.tolerance, solver.n_cap);
        if (report.converged) {
          variances[i] = optimize_phase(report.state.qubit()).var_min;
        }
      } catch (const SolverError&) {
      }
    });
    const auto it = std::min_element(variances.begin(), variances.end());
    if (!std::isfinite(*it)) {
      throw SolverError("locate_variance_dip: no grid point converged");
    }
    const int idx = static_cast<int>(it - variances.begin());
    return std::pair<double, double>{lo + step * idx, *it};
  };

  // Coarse pass, then one refinement spanning one coarse step around the
  // minimum.
  const auto [coarse_x, coarse_v] = sweep(center - half, center + half);
  const double coarse_step = 2.0 * half / (points - 1);
  const auto [fine_x, fine_v] =
      sweep(coarse_x - coarse_step, coarse_x + coarse_step);
  if (fine_v <= coarse_v) return {fine_x, fine_v};
  return {coarse_x, coarse_v};
}

double find_threshold(const ScanConfig& config, const ThresholdQuery& query) {
  config.validate();
  if (query.axis == SweepAxis::delta_x) {
    throw ConfigError("find_threshold: delta_x is the inner scan variable");
  }
  if (!(query.bracket_lo < query.bracket_hi)) {
    throw ConfigError("find_threshold: empty bracket");
  }

  // The dip is pinned once at the base configuration; the bisection then
  // follows the variance at that fixed detuning. Re-minimizing per trial
  // would track a slightly drifting dip and bias the crossing.
  const DipResult dip =
      locate_variance_dip(config.params, config.solver, 61, 3.0,
                          config.workers);

  auto inner = [&](double outer_value) {
    SystemParams p = config.params;
    set_axis_value(p, query.axis, outer_value);
    p.delta_x = dip.delta_x;
    const SolveReport report =
        converged_steady_state(p, config.solver.tolerance, config.solver.n_cap);
    if (!report.converged) {
      throw SolverError("find_threshold: solver did not converge at " +
                        std::string(to_string(query.axis)) + " = " +
                        std::to_string(outer_value));
    }
    return optimize_phase(report.state.qubit()).var_min - query.target;
  };

  double lo = query.bracket_lo;
  double hi = query.bracket_hi;
  double f_lo = inner(lo);
  const double f_hi = inner(hi);
  if (!((f_lo < 0.0) != (f_hi < 0.0))) {
    throw ConfigError(
        "find_threshold: bracket endpoints do not straddle the target");
  }
  while (hi - lo > query.rel_tol * std::max(std::abs(0.5 * (lo + hi)), 1e-12)) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = inner(mid);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& object,
                         const std::unordered_set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown key \"" + key + "\" in " + where);
    }
  }
}

double number_field(const json& object, const char* key, double fallback) {
  if (!object.contains(key)) return fallback;
  if (!object[key].is_number()) {
    throw ConfigError(std::string(key) + " must be a number");
  }
  return object[key].get<double>();
}

void apply_override(json& root, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must have the form path=value: " + spec);
  }
  const std::string path = spec.substr(0, eq);
  const std::string text = spec.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;  // bare strings are allowed unquoted
  }
  json* node = &root;
  size_t begin = 0;
  while (true) {
    const size_t dot = path.find('.', begin);
    const std::string key = path.substr(
        begin, dot == std::string::npos ? std::string::npos : dot - begin);
    if (key.empty()) throw ConfigError("bad override path: " + path);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    begin = dot + 1;
  }
}

}  // namespace

ScanConfig parse_config(const std::string& json_text,
                        const std::vector<std::string>& overrides) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config parse error: ") + err.what());
  }
  for (const auto& spec : overrides) apply_override(root, spec);

  reject_unknown_keys(root,
                      {"units", "params", "sweep", "solver", "emit", "outputs",
                       "workers", "detection"},
                      "config");

  ScanConfig config;
  if (root.contains("units")) config.units = root["units"].get<std::string>();

  if (root.contains("params")) {
    const json& p = root["params"];
    reject_unknown_keys(p,
                        {"gamma", "gamma_d", "p_x", "p_c", "kappa", "g", "rabi",
                         "delta_x", "delta_c"},
                        "params");
    config.params.gamma = number_field(p, "gamma", config.params.gamma);
    config.params.gamma_d = number_field(p, "gamma_d", config.params.gamma_d);
    config.params.p_x = number_field(p, "p_x", config.params.p_x);
    config.params.p_c = number_field(p, "p_c", config.params.p_c);
    config.params.kappa = number_field(p, "kappa", config.params.kappa);
    config.params.g = number_field(p, "g", config.params.g);
    config.params.rabi = number_field(p, "rabi", config.params.rabi);
    config.params.delta_x = number_field(p, "delta_x", config.params.delta_x);
    config.params.delta_c = number_field(p, "delta_c", config.params.delta_c);
  }

  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    reject_unknown_keys(s, {"axis", "min", "max", "points"}, "sweep");
    if (s.contains("axis")) {
      config.axis = axis_from_string(s["axis"].get<std::string>());
    }
    config.axis_min = number_field(s, "min", config.axis_min);
    config.axis_max = number_field(s, "max", config.axis_max);
    if (s.contains("points")) config.points = s["points"].get<int>();
  }

  if (root.contains("solver")) {
    const json& s = root["solver"];
    reject_unknown_keys(s, {"tolerance", "n_cap"}, "solver");
    config.solver.tolerance =
        number_field(s, "tolerance", config.solver.tolerance);
    if (s.contains("n_cap")) config.solver.n_cap = s["n_cap"].get<int>();
  }

  if (root.contains("emit")) {
    const json& e = root["emit"];
    reject_unknown_keys(e, {"format", "path"}, "emit");
    if (e.contains("format")) {
      const std::string format = e["format"].get<std::string>();
      if (format == "csv") {
        config.emit.format = EmitFormat::csv;
      } else if (format == "json") {
        config.emit.format = EmitFormat::json;
      } else {
        throw ConfigError("emit.format must be csv or json");
      }
    }
    if (e.contains("path")) config.emit.path = e["path"].get<std::string>();
  }

  if (root.contains("outputs")) {
    config.outputs = root["outputs"].get<std::vector<std::string>>();
  }
  if (root.contains("workers")) config.workers = root["workers"].get<int>();

  config.validate();
  return config;
}

ScanConfig load_config(const std::string& path,
                       const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), overrides);
}

}  // namespace fluosq
