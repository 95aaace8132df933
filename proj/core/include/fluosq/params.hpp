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

namespace fluosq {

/// Rates and detunings of the laser-driven emitter without a cavity.
/// All quantities share one unit (a reference rate chosen by the caller);
/// detunings are frequency offsets from the drive laser.
struct FreeSpaceParams {
  double gamma = 1.0;    ///< spontaneous emission rate, > 0
  double gamma_d = 0.0;  ///< pure (radiationless) dephasing rate, >= 0
  double p_x = 0.0;      ///< incoherent emitter pump rate, >= 0
  double rabi = 0.0;     ///< coherent drive strength (Rabi frequency), >= 0
  double delta_x = 0.0;  ///< emitter-laser detuning

  /// Throws std::invalid_argument on non-finite or out-of-range fields.
  void validate() const;
};

/// Full emitter + single-mode cavity parameter set.
struct SystemParams {
  double gamma = 1.0;    ///< emitter spontaneous emission rate, > 0
  double gamma_d = 0.0;  ///< emitter pure dephasing rate, >= 0
  double p_x = 0.0;      ///< incoherent emitter pump rate, >= 0
  double p_c = 0.0;      ///< incoherent cavity pump rate, 0 <= p_c < kappa
  double kappa = 1.0;    ///< cavity emission rate, > 0
  double g = 1.0;        ///< emitter-cavity coupling, > 0
  double rabi = 0.0;     ///< coherent drive strength, >= 0
  double delta_x = 0.0;  ///< emitter-laser detuning
  double delta_c = 0.0;  ///< cavity-laser detuning

  void validate() const;

  /// The bosonic mode saturates as p_c -> kappa (diverging occupation);
  /// truncated solves degrade well before that. Callers should surface a
  /// warning when this returns true.
  bool cavity_pump_near_saturation() const { return p_c > 0.1 * kappa; }

  /// Projection onto the cavity-free parameter set (drops kappa, g,
  /// delta_c, p_c).
  FreeSpaceParams free_space() const {
    return FreeSpaceParams{gamma, gamma_d, p_x, rabi, delta_x};
  }
};

}  // namespace fluosq
