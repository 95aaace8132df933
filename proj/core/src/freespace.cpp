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

#include "fluosq/freespace.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>

namespace fluosq {

namespace {

using std::complex;

// Coherence with its physical phase, valid for every channel combination:
// <A12> = -i rabi (1 - 2 <A22>) / (i delta_x + gamma_total/2).
complex<double> coherence_from_excitation(const FreeSpaceParams& p,
                                          double excitation) {
  const double gamma_total = p.gamma + p.gamma_d + p.p_x;
  const complex<double> v(0.5 * gamma_total, p.delta_x);
  return complex<double>(0.0, -p.rabi) * (1.0 - 2.0 * excitation) / v;
}

// Steady state of the three-variable Bloch system (excitation, Re and Im
// of the coherence) with every incoherent channel active.
QubitState bloch_steady_state(const FreeSpaceParams& p) {
  const double gt = 0.5 * (p.gamma + p.gamma_d + p.p_x);  // coherence decay
  Eigen::Matrix3d a;
  Eigen::Vector3d b;
  // d<A22>/dt = -2 rabi Im<A12> - gamma <A22> + p_x (1 - <A22>)
  a << -(p.gamma + p.p_x), 0.0, -2.0 * p.rabi,
      0.0, -gt, p.delta_x,
      2.0 * p.rabi, -p.delta_x, -gt;
  b << -p.p_x, 0.0, p.rabi;
  const Eigen::Vector3d x = a.fullPivLu().solve(b);
  return {x(0), complex<double>(x(1), x(2))};
}

}  // namespace

double saturation_z(const FreeSpaceParams& p) {
  p.validate();
  if (p.gamma_d > 0.0 && p.p_x > 0.0) {
    throw std::invalid_argument(
        "saturation_z: no closed form with both gamma_d and p_x active; "
        "use steady_state");
  }
  if (p.gamma_d > 0.0) {
    const double half_width = 0.5 * (p.gamma + p.gamma_d);
    return (1.0 + p.gamma_d / p.gamma) * p.rabi * p.rabi /
           (half_width * half_width + p.delta_x * p.delta_x);
  }
  const double half_width = 0.5 * (p.gamma + p.p_x);
  return p.rabi * p.rabi /
         (half_width * half_width + p.delta_x * p.delta_x);
}

QubitState steady_state(const FreeSpaceParams& p) {
  p.validate();
  if (p.gamma_d > 0.0 && p.p_x > 0.0) return bloch_steady_state(p);

  const double z = saturation_z(p);
  double excitation = 0.0;
  if (p.p_x > 0.0) {
    const double pump_fraction = p.p_x / (p.gamma + p.p_x);
    excitation = (z + pump_fraction) / (1.0 + 2.0 * z);
  } else {
    excitation = z / (1.0 + 2.0 * z);
  }
  return {excitation, coherence_from_excitation(p, excitation)};
}

double freespace_variance(const FreeSpaceParams& p) {
  return optimize_phase(steady_state(p)).var_min;
}

}  // namespace fluosq
