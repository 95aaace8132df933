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

#include "fluosq/approx.hpp"

#include <cmath>
#include <stdexcept>

namespace fluosq {

namespace {

using std::complex;

// Emitter linewidth entering the scenario's saturation parameter.
double scenario_gamma(const SystemParams& p, Scenario s) {
  return s == Scenario::spe_pump ? p.gamma + p.p_x : p.gamma;
}

// Coherence suppression of the dephasing scenario; 1 elsewhere.
double scenario_prefactor(const SystemParams& p, Scenario s) {
  return s == Scenario::dephasing ? 1.0 / (1.0 + p.gamma_d / p.gamma) : 1.0;
}

}  // namespace

complex<double> v_factor(const SystemParams& p, Scenario s) {
  p.validate();
  const double kappa_eff = s == Scenario::cavity_pump ? p.kappa - p.p_c
                                                      : p.kappa;
  const complex<double> cavity_term =
      p.g * p.g / complex<double>(0.5 * kappa_eff, p.delta_c);
  double linewidth = scenario_gamma(p, s);
  if (s == Scenario::dephasing) linewidth += p.gamma_d;
  return complex<double>(0.5 * linewidth, p.delta_x) + cavity_term;
}

double z_tilde(const SystemParams& p, Scenario s) {
  const complex<double> v = v_factor(p, s);
  return 2.0 * p.rabi * p.rabi * v.real() /
         (scenario_gamma(p, s) * std::norm(v));
}

double scenario_z(const SystemParams& p, Scenario s) {
  // g -> 0 limit of z_tilde: the matching free-space saturation parameter.
  double linewidth = scenario_gamma(p, s);
  if (s == Scenario::dephasing) linewidth += p.gamma_d;
  const double half = 0.5 * linewidth;
  const double z0 =
      p.rabi * p.rabi / (half * half + p.delta_x * p.delta_x);
  return s == Scenario::dephasing ? (1.0 + p.gamma_d / p.gamma) * z0 : z0;
}

PurificationRate purification_rate(const SystemParams& p, double n_cav,
                                   Scenario s) {
  p.validate();
  if (!(n_cav >= 0.0)) {
    throw std::invalid_argument("purification_rate: n_cav must be >= 0");
  }
  switch (s) {
    case Scenario::base:
    case Scenario::dephasing: {
      const double r = p.kappa * n_cav / p.gamma;
      return {r, r};
    }
    case Scenario::spe_pump: {
      const double raw = p.kappa * n_cav / (p.gamma + p.p_x);
      return {raw, raw - p.p_x / (p.gamma + p.p_x)};
    }
    case Scenario::cavity_pump: {
      const double raw = (p.kappa - p.p_c) * n_cav / p.gamma;
      return {raw, raw - p.p_c / p.gamma};
    }
  }
  throw std::logic_error("purification_rate: unknown scenario");
}

ApproxContext make_approx_context(const SystemParams& p, double n_cav,
                                  Scenario s) {
  const PurificationRate rate = purification_rate(p, n_cav, s);
  return {s, v_factor(p, s), z_tilde(p, s), rate.raw, rate.effective};
}

ApproxMoments approx_moments(const SystemParams& p, double rate_effective,
                             Scenario s) {
  const double z = scenario_z(p, s);
  const double q = scenario_prefactor(p, s);
  const double denom = 1.0 + 2.0 * z;
  const double excitation = (z - rate_effective) / denom;
  const double coherence_sq =
      q * z * std::pow(1.0 + 2.0 * rate_effective, 2) / (denom * denom);

  // Phase from the coherence equation of motion; modulus from the closed
  // form above.
  const complex<double> direction =
      complex<double>(0.0, -p.rabi) * (1.0 - 2.0 * excitation) /
      v_factor(p, s);
  const double mag = std::abs(direction);
  complex<double> coherence{std::sqrt(std::max(coherence_sq, 0.0)), 0.0};
  if (mag > 0.0) coherence *= direction / mag;

  ApproxMoments result;
  result.state = {excitation, coherence};
  result.in_domain = excitation >= 0.0 && excitation <= 1.0;
  return result;
}

double approx_variance(const SystemParams& p, double rate_effective,
                       Scenario s) {
  const double z = scenario_z(p, s);
  const double q = scenario_prefactor(p, s);
  const double denom = 1.0 + 2.0 * z;
  const double base_variance = 2.0 * (z / denom - 2.0 * q * z / (denom * denom));
  const double correction =
      (2.0 * rate_effective / denom) *
      (1.0 + q * 8.0 * z * (1.0 + rate_effective) / denom);
  return base_variance - correction;
}

double cavity_resonance_detuning(const SystemParams& p) {
  p.validate();
  const double discriminant = p.delta_c * p.delta_c - 4.0 * p.rabi * p.rabi;
  if (discriminant < 0.0) {
    throw std::domain_error(
        "cavity_resonance_detuning: |delta_c| < 2 rabi, the sidebands "
        "cannot reach the cavity");
  }
  return std::copysign(std::sqrt(discriminant), p.delta_c);
}

}  // namespace fluosq
