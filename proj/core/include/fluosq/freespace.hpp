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

#include "fluosq/observables.hpp"
#include "fluosq/params.hpp"

namespace fluosq {

/// Saturation parameter of the driven emitter without a cavity.
///
/// Closed forms exist for at most one incoherent channel:
///   - gamma_d = p_x = 0:  z   = rabi^2 / ((gamma/2)^2 + delta_x^2)
///   - p_x = 0:            z_D = (1 + gamma_d/gamma) rabi^2 /
///                               (((gamma+gamma_d)/2)^2 + delta_x^2)
///   - gamma_d = 0:        z_x = rabi^2 / (((gamma+p_x)/2)^2 + delta_x^2)
///
/// Throws std::invalid_argument when both gamma_d > 0 and p_x > 0; the
/// combined case has no single saturation parameter, use steady_state().
double saturation_z(const FreeSpaceParams& p);

/// Stationary emitter state under coherent drive, spontaneous emission,
/// and optionally pure dephasing and incoherent pumping. Single-channel
/// parameter sets take the closed forms in terms of saturation_z(); with
/// both incoherent rates nonzero the three-variable Bloch steady state is
/// solved directly. The coherence carries its physical phase,
/// <A12> = -i rabi (1 - 2 <A22>) / (i delta_x + (gamma+gamma_d+p_x)/2).
QubitState steady_state(const FreeSpaceParams& p);

/// Phase-optimized minimal variance of the free-space fluorescence,
/// equal to optimize_phase(steady_state(p)).var_min. Negative (squeezed)
/// iff z < 1/2 when both incoherent rates vanish.
double freespace_variance(const FreeSpaceParams& p);

}  // namespace fluosq
