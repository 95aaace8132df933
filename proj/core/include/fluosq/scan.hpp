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

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fluosq/params.hpp"

namespace fluosq {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SweepAxis { delta_x, gamma_d, p_x, p_c, rabi };

const char* to_string(SweepAxis axis);
SweepAxis axis_from_string(const std::string& name);

/// Reads or writes the swept field of a parameter set.
void set_axis_value(SystemParams& p, SweepAxis axis, double value);
double get_axis_value(const SystemParams& p, SweepAxis axis);

struct SolverSettings {
  double tolerance = 1e-8;
  int n_cap = 64;
};

enum class EmitFormat { csv, json };

struct EmitSettings {
  EmitFormat format = EmitFormat::csv;
  std::string path;  ///< empty: caller-managed output
};

/// One declarative sweep: base parameters, the axis and its grid, solver
/// settings, and the emission target. All rates and detunings are plain
/// numbers in the configured unit (the coupling g by default).
struct ScanConfig {
  SystemParams params;
  SweepAxis axis = SweepAxis::delta_x;
  double axis_min = 0.0;
  double axis_max = 0.0;
  int points = 2;
  /// Observable columns to emit; empty selects the full fixed set.
  std::vector<std::string> outputs;
  SolverSettings solver;
  EmitSettings emit;
  std::string units = "g";
  int workers = 0;  ///< 0: one per available core

  void validate() const;  // throws ConfigError
};

/// One evaluated grid point. When ok is false the solver did not converge
/// (or rejected the parameters) and the observable fields are NaN; the
/// scan itself continues.
struct ScanRow {
  double axis_value = 0.0;
  bool ok = false;

  double excitation = 0.0;
  double coherence_sq = 0.0;
  double purity = 0.0;
  double var_min = 0.0;
  double var_max = 0.0;
  double n_cav = 0.0;
  double r_raw = 0.0;
  double r_effective = 0.0;

  double approx_excitation = 0.0;
  double approx_coherence_sq = 0.0;
  double approx_var_min = 0.0;

  double fs_excitation = 0.0;
  double fs_coherence_sq = 0.0;
  double fs_purity = 0.0;
  double fs_var_min = 0.0;

  int n_used = 0;
  double residual = 0.0;
};

struct ScanResult {
  std::vector<ScanRow> rows;  ///< ordered by axis value
  int failed = 0;             ///< number of rows with ok = false
};

/// Full names of the observable columns, in emission order (the axis
/// column and the ok flag are always present and are not listed here).
const std::vector<std::string>& scan_column_names();

/// Evaluates every grid point: truncation-converged cavity solve,
/// free-space closed forms, and the analytical approximation chain.
/// Individual failures become flagged rows, never an abort. Points are
/// dispatched to a worker pool; the result order is the axis order
/// regardless of scheduling.
ScanResult run_scan(const ScanConfig& config);

/// Emission: CSV with a single header row, 12 significant digits, LF line
/// endings; or a JSON array of row objects with identical field names.
/// Identical results produce identical bytes.
void emit_csv(const ScanResult& result, const ScanConfig& config,
              std::ostream& out);
void emit_json(const ScanResult& result, const ScanConfig& config,
               std::ostream& out);

/// Writes the configured format to emit.path plus a deterministic sidecar
/// <path>.meta.json carrying the effective config echo and unit choice.
void emit(const ScanResult& result, const ScanConfig& config);

/// Location and depth of the variance dip: the minimum of the
/// phase-optimized variance over an emitter-detuning sub-scan of `points`
/// samples spanning +-half_width_g (in units of g) around the predicted
/// sideband resonance, refined once around the coarse minimum.
struct DipResult {
  double delta_x = 0.0;
  double var_min = 0.0;
};
DipResult locate_variance_dip(const SystemParams& p,
                              const SolverSettings& solver, int points = 61,
                              double half_width_g = 3.0, int workers = 0);

/// Bracketing bisection query for where the dip variance crosses `target`
/// as `axis` varies.
struct ThresholdQuery {
  SweepAxis axis = SweepAxis::gamma_d;
  double target = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 1.0;
  double rel_tol = 1e-3;
};

/// The dip location is fixed once from the base configuration (the
/// resonance of the setup under study); the bisection then tracks the
/// variance at that detuning as the outer parameter moves. Throws
/// ConfigError when the bracket endpoints do not straddle the target.
double find_threshold(const ScanConfig& config, const ThresholdQuery& query);

/// Parses a JSON config file; see the README for the schema. Unknown keys
/// are rejected. `overrides` entries take the form "dotted.path=value".
ScanConfig load_config(const std::string& path,
                       const std::vector<std::string>& overrides = {});
ScanConfig parse_config(const std::string& json_text,
                        const std::vector<std::string>& overrides = {});

}  // namespace fluosq
