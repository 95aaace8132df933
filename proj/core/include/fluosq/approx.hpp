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

#include <complex>

#include "fluosq/observables.hpp"
#include "fluosq/params.hpp"

namespace fluosq {

/// Which environmental channel the analytical approximation accounts for.
/// The chain treats one channel at a time; combined channels are outside
/// its domain (the numerical solver handles those).
enum class Scenario { base, dephasing, spe_pump, cavity_pump };

/// Complex damping factor of the emitter coherence, combining detuning,
/// total emitter linewidth, and the cavity back-action (Purcell) term:
///   base:        i delta_x + gamma/2            + g^2/(i delta_c + kappa/2)
///   dephasing:   base + gamma_d/2
///   spe_pump:    i delta_x + (gamma + p_x)/2    + g^2/(i delta_c + kappa/2)
///   cavity_pump: i delta_x + gamma/2 + g^2/(i delta_c + (kappa - p_c)/2)
std::complex<double> v_factor(const SystemParams& p, Scenario s);

/// Saturation parameter built from the full v_factor (cavity term kept):
/// 2 rabi^2 Re[V] / (G |V|^2), with G = gamma + p_x for spe_pump and
/// G = gamma otherwise.
double z_tilde(const SystemParams& p, Scenario s);

/// The g -> 0 reduction of z_tilde used by the closed moment formulas;
/// for realistic parameters the cavity shifts V only marginally, so this
/// equals the free-space saturation parameter of the matching scenario.
double scenario_z(const SystemParams& p, Scenario s);

/// Excitation diverted from the emitter into the cavity decay channel,
/// from the solver-supplied intracavity occupation n_cav = <a^dag a>:
///   base/dephasing: raw = eff = kappa n_cav / gamma
///   spe_pump:       raw = kappa n_cav / (gamma + p_x),
///                   eff = raw - p_x / (gamma + p_x)
///   cavity_pump:    raw = (kappa - p_c) n_cav / gamma,
///                   eff = raw - p_c / gamma
/// raw >= 0 always; eff < 0 means the incoherent pump wins and the
/// emitter state is degraded instead of purified.
struct PurificationRate {
  double raw = 0.0;
  double effective = 0.0;
};
PurificationRate purification_rate(const SystemParams& p, double n_cav,
                                   Scenario s);

/// All scenario-dependent intermediates in one place.
struct ApproxContext {
  Scenario scenario = Scenario::base;
  std::complex<double> v{0, 0};
  double z_tilde = 0.0;
  double rate_raw = 0.0;
  double rate_effective = 0.0;
};
ApproxContext make_approx_context(const SystemParams& p, double n_cav,
                                  Scenario s);

/// Approximate emitter moments for a given effective purification rate R:
///   <A22>      = (z - R) / (1 + 2z)
///   |<A12>|^2  = q z (1 + 2R)^2 / (1 + 2z)^2
/// with z = scenario_z and q = 1/(1 + gamma_d/gamma) for the dephasing
/// scenario, q = 1 otherwise. The coherence phase follows from
/// -i rabi (1 - 2 <A22>) / V. in_domain flags (rather than throws) when
/// the predicted excitation leaves [0, 1]; the approximation is then
/// outside its validity region.
struct ApproxMoments {
  QubitState state;
  bool in_domain = true;
};
ApproxMoments approx_moments(const SystemParams& p, double rate_effective,
                             Scenario s);

/// Minimal normally ordered variance of the approximate state,
///   var_fs(z) - (2R / (1+2z)) [ 1 + q 8 z (1 + R) / (1+2z) ],
/// where var_fs(z) = 2 (z/(1+2z) - 2 q z/(1+2z)^2) is the R = 0 value.
/// Algebraically identical to optimize_phase(approx_moments(...)).var_min.
double approx_variance(const SystemParams& p, double rate_effective,
                       Scenario s);

/// Emitter detuning that parks the cavity on the lower fluorescence
/// sideband: delta_c^2 = (2 rabi)^2 + delta_x^2 solved for delta_x with
/// the sign of delta_c (both detunings sit on the same side of the laser).
/// Throws std::domain_error when delta_c^2 < 4 rabi^2 (no real solution).
double cavity_resonance_detuning(const SystemParams& p);

}  // namespace fluosq
