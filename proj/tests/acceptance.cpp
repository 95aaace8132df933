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
//
// End-to-end acceptance suite. Each criterion prints exactly one
// [PASS]/[FAIL] line; the process exits nonzero if any criterion fails.
// Every tolerance is fixed here, in code.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fluosq/approx.hpp"
#include "fluosq/cavity.hpp"
#include "fluosq/detection.hpp"
#include "fluosq/freespace.hpp"
#include "fluosq/observables.hpp"
#include "fluosq/scan.hpp"
#include "oracles.hpp"

using namespace fluosq;
using std::complex;

namespace {

SystemParams fig2_params() {
  SystemParams p;
  p.gamma = 1.0 / 23.0;
  p.kappa = 1.58;
  p.g = 1.0;
  p.rabi = 14.0;
  p.delta_x = -19.29;
  p.delta_c = -34.0;
  return p;
}

ScanConfig fig2_config() {
  ScanConfig config;
  config.params = fig2_params();
  config.axis = SweepAxis::delta_x;
  config.axis_min = -22.0;
  config.axis_max = -16.0;
  config.points = 61;
  config.solver.tolerance = 1e-8;
  return config;
}

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// --------------------------------------------------------------------------
bool criterion_1_free_space(Check& check, std::string&) {
  // z = 1/6 at resonance: excitation 1/8, |coherence|^2 = 3/32,
  // variance -1/8; analytic identities to 1e-12.
  const double gamma = 1.0;
  const double rabi = std::sqrt(1.0 / 6.0) * 0.5 * gamma;
  const FreeSpaceParams p{gamma, 0.0, 0.0, rabi, 0.0};
  check.require(std::abs(saturation_z(p) - 1.0 / 6.0) <= 1e-12,
                "z != 1/6: " + fmt(saturation_z(p)));
  const QubitState s = steady_state(p);
  check.require(std::abs(s.excitation - 0.125) <= 1e-12,
                "excitation " + fmt(s.excitation));
  check.require(std::abs(std::norm(s.coherence) - 3.0 / 32.0) <= 1e-12,
                "|coherence|^2 " + fmt(std::norm(s.coherence)));
  check.require(std::abs(freespace_variance(p) + 0.125) <= 1e-12,
                "variance " + fmt(freespace_variance(p)));

  // The closed variance form 2z(2z-1)/(1+2z)^2 across a z sweep.
  for (double z : {0.01, 0.1, 1.0 / 6.0, 0.4, 0.5, 1.0, 5.0}) {
    const FreeSpaceParams q{gamma, 0.0, 0.0, std::sqrt(z) * 0.5 * gamma, 0.0};
    const double expected =
        2.0 * z * (2.0 * z - 1.0) / std::pow(1 + 2 * z, 2);
    check.require(std::abs(freespace_variance(q) - expected) <= 1e-12,
                  "variance form at z=" + fmt(z));
  }
  return check.ok;
}

// --------------------------------------------------------------------------
bool criterion_2_purification_point(Check& check, std::string& extra) {
  const auto start = std::chrono::steady_clock::now();
  const ScanConfig config = fig2_config();
  const ScanResult result = run_scan(config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  check.require(result.failed == 0, "flagged rows in the reference scan");
  int best = 0;
  for (size_t i = 1; i < result.rows.size(); ++i) {
    if (result.rows[i].var_min < result.rows[best].var_min) {
      best = static_cast<int>(i);
    }
  }
  const ScanRow& dip = result.rows[best];
  check.require(std::abs(dip.var_min + 0.236) <= 0.005,
                "min variance " + fmt(dip.var_min));
  check.require(std::abs(dip.excitation - 0.220) <= 0.005,
                "excitation " + fmt(dip.excitation));
  check.require(dip.purity >= 0.990, "purity " + fmt(dip.purity));
  check.require(seconds < 10.0, "scan took " + fmt(seconds) + " s");
  extra = "min var " + fmt(dip.var_min) + " at delta_x " +
          fmt(dip.axis_value) + ", purity " + fmt(dip.purity) + ", " +
          fmt(seconds) + " s";
  return check.ok;
}

// --------------------------------------------------------------------------
bool criterion_3_exact_identities(Check& check, std::string&) {
  const SolveReport reference = converged_steady_state(fig2_params(), 1e-8);
  check.require(reference.converged, "reference solve did not converge");
  auto residuals = exact_relation_residuals(reference.state, fig2_params());
  for (double r : residuals) {
    check.require(r <= 1e-8, "reference residual " + fmt(r));
  }

  std::mt19937 rng(0xacce97);
  std::uniform_real_distribution<double> gamma_dist(0.05, 0.2);
  std::uniform_real_distribution<double> kappa_dist(0.5, 2.5);
  std::uniform_real_distribution<double> g_dist(0.3, 1.0);
  std::uniform_real_distribution<double> rabi_dist(0.2, 3.0);
  std::uniform_real_distribution<double> dx_dist(-10.0, 10.0);
  std::uniform_real_distribution<double> dc_mag(2.0, 15.0);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int draw = 0; draw < 100; ++draw) {
    SystemParams p;
    p.gamma = gamma_dist(rng);
    p.kappa = kappa_dist(rng);
    p.g = g_dist(rng);
    p.rabi = rabi_dist(rng);
    p.delta_x = dx_dist(rng);
    p.delta_c = (sign(rng) ? 1.0 : -1.0) * dc_mag(rng);
    const SolveReport report = converged_steady_state(p, 1e-10);
    check.require(report.converged,
                  "draw " + std::to_string(draw) + " did not converge");
    if (!report.converged) continue;
    residuals = exact_relation_residuals(report.state, p);
    for (double r : residuals) {
      check.require(r <= 1e-8,
                    "draw " + std::to_string(draw) + " residual " + fmt(r));
    }
  }
  return check.ok;
}

// --------------------------------------------------------------------------
bool criterion_4_dephasing_thresholds(Check& check, std::string& extra) {
  ScanConfig config = fig2_config();
  const double gamma = config.params.gamma;

  ThresholdQuery vanish;
  vanish.axis = SweepAxis::gamma_d;
  vanish.target = 0.0;
  vanish.bracket_lo = 5.0 * gamma;
  vanish.bracket_hi = 10.0 * gamma;
  const double vanish_at = find_threshold(config, vanish) / gamma;
  check.require(std::abs(vanish_at - 7.47) <= 0.15,
                "vanish threshold " + fmt(vanish_at) + " gamma");

  ThresholdQuery half;
  half.axis = SweepAxis::gamma_d;
  half.target = -0.125;
  half.bracket_lo = 2.0 * gamma;
  half.bracket_hi = 5.0 * gamma;
  const double half_at = find_threshold(config, half) / gamma;
  check.require(std::abs(half_at - 3.24) <= 0.15,
                "-1/8 threshold " + fmt(half_at) + " gamma");

  // Weak drive: the sideband moves to delta_x ~ -33.9 and squeezing must
  // survive nineteen linewidths of dephasing.
  SystemParams weak = config.params;
  weak.rabi = weak.g;
  weak.gamma_d = 19.0 * gamma;
  const DipResult dip = locate_variance_dip(weak, config.solver);
  check.require(dip.var_min < 0.0,
                "no squeezing left at gamma_d = 19 gamma: " +
                    fmt(dip.var_min));
  extra = "vanish " + fmt(vanish_at) + " gamma, -1/8 " + fmt(half_at) +
          " gamma, weak-drive dip " + fmt(dip.var_min);
  return check.ok;
}

// --------------------------------------------------------------------------
bool criterion_5_spe_pump(Check& check, std::string& extra) {
  SystemParams p = fig2_params();
  p.p_x = p.gamma;
  p.delta_x = -19.3;
  const SolveReport report = converged_steady_state(p, 1e-8);
  check.require(report.converged, "solve did not converge");
  const double variance = optimize_phase(report.state.qubit()).var_min;
  check.require(std::abs(variance + 0.113) <= 0.005,
                "variance " + fmt(variance));

  // Saturated incoherent pumping in free space pins the variance at +1.
  const double fs = freespace_variance(p.free_space());
  check.require(std::abs(fs - 1.0) <= 1e-12, "free-space variance " + fmt(fs));
  extra = "cavity " + fmt(variance) + ", free space " + fmt(fs);
  return check.ok;
}

// --------------------------------------------------------------------------
bool criterion_6_cavity_pump(Check& check, std::string& extra) {
  SystemParams p = fig2_params();
  p.p_c = p.gamma;
  SolverSettings solver;
  const DipResult dip = locate_variance_dip(p, solver);
  check.require(dip.var_min <= -0.10, "dip variance " + fmt(dip.var_min));

  double worst = 0.0;
  for (double dx : {-60.0, -50.0, 50.0, 60.0}) {
    SystemParams q = p;
    q.delta_x = dx;
    const SolveReport report = converged_steady_state(q, 1e-8);
    check.require(report.converged,
                  "solve at delta_x = " + fmt(dx) + " did not converge");
    const double variance = optimize_phase(report.state.qubit()).var_min;
    const double fs = freespace_variance(q.free_space());
    worst = std::max(worst, std::abs(variance - fs));
  }
  check.require(worst <= 0.005, "free-space mismatch " + fmt(worst));
  extra = "dip " + fmt(dip.var_min) + ", far-detuned mismatch " + fmt(worst);
  return check.ok;
}

// --------------------------------------------------------------------------
bool criterion_7_property_suites(Check& check, std::string&) {
  // Density-matrix invariants and the coherence bound across random
  // parameter draws with every channel combination.
  std::mt19937 rng(0x900d1ab);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int draw = 0; draw < 24; ++draw) {
    SystemParams p;
    p.gamma = 0.05 + 0.15 * unit(rng);
    p.kappa = 0.5 + 2.0 * unit(rng);
    p.g = 0.3 + 0.7 * unit(rng);
    p.rabi = 3.0 * unit(rng);
    p.delta_x = -10.0 + 20.0 * unit(rng);
    p.delta_c = (unit(rng) < 0.5 ? -1.0 : 1.0) * (2.0 + 13.0 * unit(rng));
    if (draw % 2) p.gamma_d = 0.5 * unit(rng);
    if (draw % 3 == 0) p.p_x = 0.1 * unit(rng);
    if (draw % 4 == 0) p.p_c = 0.05 * p.kappa * unit(rng);
    const SolveReport report = converged_steady_state(p, 1e-9);
    check.require(report.converged,
                  "draw " + std::to_string(draw) + " did not converge");
    if (!report.converged) continue;
    const JointState& state = report.state;
    check.require(state.trace_error() <= 1e-10,
                  "trace error " + fmt(state.trace_error()));
    check.require(state.hermiticity_error() <= 1e-10,
                  "hermiticity error " + fmt(state.hermiticity_error()));
    check.require(state.min_eigenvalue() >= -1e-8,
                  "negative eigenvalue " + fmt(state.min_eigenvalue()));
    const QubitState q = state.qubit();
    check.require(std::norm(q.coherence) <=
                      q.excitation * (1.0 - q.excitation) + 1e-10,
                  "coherence bound violated on draw " + std::to_string(draw));
  }

  // Envelope and phase-optimization properties over random emitter states.
  for (int draw = 0; draw < 1000; ++draw) {
    const QubitState q = oracles::random_qubit_state();
    const SqueezingReport report = optimize_phase(q);
    check.require(report.var_min >= -0.25 - 1e-12, "below -1/4");
    check.require(report.var_min >= variance_envelope(q.excitation) - 1e-11,
                  "below the excitation envelope");
    for (int k = 0; k < 16; ++k) {
      const double phase = std::numbers::pi * k / 16.0;
      const double value = variance_at_phase(q, phase);
      check.require(value >= report.var_min - 1e-11 &&
                        value <= report.var_max + 1e-11,
                    "phase envelope violated");
    }
  }

  // Decoupled-cavity equivalence for every incoherent channel combination.
  for (int mask = 0; mask < 8; ++mask) {
    SystemParams p;
    p.gamma = 1.0;
    p.kappa = 2.0;
    p.g = 1e-9;
    p.rabi = 0.8;
    p.delta_x = 0.5;
    p.delta_c = -0.7;
    p.gamma_d = (mask & 1) ? 0.3 : 0.0;
    p.p_x = (mask & 2) ? 0.2 : 0.0;
    p.p_c = (mask & 4) ? 0.15 : 0.0;
    const SolveReport report = converged_steady_state(p, 1e-10);
    check.require(report.converged,
                  "combo " + std::to_string(mask) + " did not converge");
    const QubitState fs = steady_state(p.free_space());
    check.require(
        std::abs(report.state.excitation - fs.excitation) <= 1e-6 &&
            std::abs(report.state.coherence - fs.coherence) <= 1e-6,
        "free-space mismatch on combo " + std::to_string(mask));
  }
  return check.ok;
}

// --------------------------------------------------------------------------
bool criterion_8_approximation(Check& check, std::string& extra) {
  SystemParams p = fig2_params();
  p.delta_x = cavity_resonance_detuning(p);

  // Base scenario: the analytical excitation tracks the solver within 0.05.
  const SolveReport base = converged_steady_state(p, 1e-8);
  check.require(base.converged, "base solve did not converge");
  const PurificationRate base_rate =
      purification_rate(p, base.state.photon_number, Scenario::base);
  const ApproxMoments base_approx =
      approx_moments(p, base_rate.effective, Scenario::base);
  const double error =
      std::abs(base_approx.state.excitation - base.state.excitation);
  check.require(error <= 0.05, "approx excitation error " + fmt(error));

  // Purification inequalities across the dephasing ladder, both for the
  // solver and for the analytical chain.
  for (int k : {0, 2, 4, 6, 8}) {
    SystemParams q = p;
    q.gamma_d = k * q.gamma;
    const SolveReport report = converged_steady_state(q, 1e-8);
    check.require(report.converged,
                  "gamma_d = " + std::to_string(k) + " gamma not converged");
    if (!report.converged) continue;
    const QubitState fs = steady_state(q.free_space());
    check.require(report.state.excitation < fs.excitation,
                  "no excitation reduction at gamma_d = " + std::to_string(k) +
                      " gamma");
    check.require(std::norm(report.state.coherence) > std::norm(fs.coherence),
                  "no coherence gain at gamma_d = " + std::to_string(k) +
                      " gamma");

    const Scenario scenario = k == 0 ? Scenario::base : Scenario::dephasing;
    const PurificationRate rate =
        purification_rate(q, report.state.photon_number, scenario);
    const ApproxMoments approx = approx_moments(q, rate.effective, scenario);
    check.require(approx.state.excitation < fs.excitation,
                  "approx misses the excitation reduction at gamma_d = " +
                      std::to_string(k) + " gamma");
    check.require(std::norm(approx.state.coherence) > std::norm(fs.coherence),
                  "approx misses the coherence gain at gamma_d = " +
                      std::to_string(k) + " gamma");
  }
  extra = "base excitation error " + fmt(error);
  return check.ok;
}

// --------------------------------------------------------------------------
bool criterion_9_detection(Check& check, std::string&) {
  // Arithmetic reference: maximal free-space squeezing, unit LO.
  const QubitState q{0.125, {std::sqrt(3.0 / 32.0), 0.0}};
  for (double eta : {1.0, 0.25, 0.01}) {
    const SignalMoments sig = SignalMoments::from_emitter(q, 0.0);
    const DetectionResult r =
        delta_g22(sig, {1.0, 0.0, 0.0}, eta, variance_at_phase(q, 0.0));
    check.require(
        std::abs(r.delta_g - eta * eta * 7.0 / 256.0) <= 1e-12 * eta * eta,
        "delta_g at eta = " + fmt(eta) + ": " + fmt(r.delta_g));
  }

  // Unsqueezed inputs can never produce a positive difference.
  std::mt19937 rng(0xde7ec7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  int tested = 0;
  while (tested < 1000) {
    const QubitState state = oracles::random_qubit_state();
    const double phase = angle(rng);
    const double variance = variance_at_phase(state, phase);
    if (variance < 0.0) continue;  // squeezed at this phase: skip
    ++tested;
    const SignalMoments sig = SignalMoments::from_emitter(state, phase);
    const LocalOscillator lo{5.0 * unit(rng), phase, 0.0};
    const DetectionResult r = delta_g22(sig, lo, 0.5, variance);
    check.require(r.delta_g <= 1e-15,
                  "positive delta_g without squeezing: " + fmt(r.delta_g));
  }
  return check.ok;
}

// --------------------------------------------------------------------------
bool criterion_10_determinism(Check& check, std::string&) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fluosq_acceptance";
  fs::create_directories(dir);

  auto read_bytes = [](const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };

  for (EmitFormat format : {EmitFormat::csv, EmitFormat::json}) {
    ScanConfig config = fig2_config();
    config.points = 11;
    config.axis_min = -20.0;
    config.axis_max = -18.5;
    config.emit.format = format;
    const char* name = format == EmitFormat::csv ? "run.csv" : "run.json";

    config.emit.path = (dir / (std::string("a_") + name)).string();
    emit(run_scan(config), config);
    const std::string first = read_bytes(config.emit.path);
    const std::string first_meta = read_bytes(config.emit.path + ".meta.json");

    config.workers = 3;  // scheduling must not leak into the bytes
    config.emit.path = (dir / (std::string("b_") + name)).string();
    emit(run_scan(config), config);
    const std::string second = read_bytes(config.emit.path);

    check.require(!first.empty(), "empty data file");
    check.require(first == second,
                  std::string("bytes differ between runs (") + name + ")");
    check.require(!first_meta.empty(), "missing sidecar");
  }
  return check.ok;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* label;
    bool (*run)(Check&, std::string&);
  };

  const std::vector<Criterion> criteria = {
      {1, "free-space closed forms (z = 1/6 -> e = 1/8, var = -1/8, 1e-12)",
       criterion_1_free_space},
      {2, "purification reference point (var -0.236, e 0.220, purity >= 0.99)",
       criterion_2_purification_point},
      {3, "exact steady-state identities (residuals <= 1e-8, 100 draws)",
       criterion_3_exact_identities},
      {4, "dephasing thresholds (7.47, 3.24 gamma; survival at 19 gamma)",
       criterion_4_dephasing_thresholds},
      {5, "saturated emitter pump (var -0.113; free space pinned at +1)",
       criterion_5_spe_pump},
      {6, "cavity pump (dip <= -0.10; free-space tail within 0.005)",
       criterion_6_cavity_pump},
      {7, "property suites (density matrix, envelopes, decoupled limit)",
       criterion_7_property_suites},
      {8, "analytical approximation fidelity and purification direction",
       criterion_8_approximation},
      {9, "homodyne detection (7 eta^2/256; no false positives, 1000 draws)",
       criterion_9_detection},
      {10, "byte-identical emission across repeated runs",
       criterion_10_determinism},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    Check check;
    std::string extra;
    bool ok = false;
    try {
      ok = criterion.run(check, extra);
    } catch (const std::exception& err) {
      check.ok = false;
      check.detail = std::string("exception: ") + err.what();
    }
    if (ok && check.ok) {
      std::printf("[PASS] %2d. %s%s%s\n", criterion.id, criterion.label,
                  extra.empty() ? "" : " -- ", extra.c_str());
    } else {
      ++failures;
      std::printf("[FAIL] %2d. %s -- %s\n", criterion.id, criterion.label,
                  check.detail.c_str());
    }
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
