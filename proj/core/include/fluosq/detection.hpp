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
#include <optional>
#include <vector>

#include "fluosq/observables.hpp"

namespace fluosq {

/// Normally ordered moments of the signal field entering the homodyne
/// cross-correlation. The local-oscillator phase is folded into the phase
/// reference of these moments (50:50 beam splitter throughout).
struct SignalMoments {
  double intensity = 0.0;                          ///< <E- E+>
  std::complex<double> amplitude{0, 0};            ///< <E+>
  std::complex<double> squared_amplitude{0, 0};    ///< <E+^2>
  double normally_ordered_intensity_sq = 0.0;      ///< <:I^2:>

  /// Moments of a two-level emitter observed at local-oscillator phase
  /// `lo_phase`: a single excitation can neither contribute <E+^2> nor
  /// <:I^2:>, so both are zero by construction.
  static SignalMoments from_emitter(const QubitState& q, double lo_phase);
};

/// Coherent reference beam mixed with the signal.
struct LocalOscillator {
  double intensity = 0.0;           ///< I_LO = E_LO^2
  double phase = 0.0;               ///< radians
  double classical_variance = 0.0;  ///< amplitude-fluctuation variance of E_LO
};

struct DetectionResult {
  double delta_g = 0.0;         ///< equal-time minus uncorrelated correlation
  double classical_floor = 0.0; ///< eta^2 I_LO * classical amplitude variance
  bool detectable = false;      ///< delta_g > classical_floor
  double efficiency = 1.0;      ///< eta as supplied
};

/// Equal-time intensity cross-correlation behind the 50:50 splitter:
/// (eta^2/4) [ <:I^2:> + I_LO^2 - 2 I_LO Re <E+^2> ].
double g22_equal_time(const SignalMoments& sig, const LocalOscillator& lo,
                      double eta);

/// Difference between the equal-time and the long-delay (uncorrelated)
/// cross-correlation:
///   (eta^2/4) ( <:(dI)^2:> - I_LO * variance_sig ),
/// with <:(dI)^2:> = <:I^2:> - <I>^2 and variance_sig the normally ordered
/// field variance at the local-oscillator phase. For an emitter signal
/// (<:I^2:> = 0) this is -(eta^2/4)(I^2 + I_LO * variance_sig): positive
/// only when the field is squeezed. Detection additionally requires the
/// difference to clear the classical local-oscillator noise floor.
DetectionResult delta_g22(const SignalMoments& sig, const LocalOscillator& lo,
                          double eta, double variance_sig);

/// Grid of local-oscillator settings to search.
struct LoGrid {
  std::vector<double> intensities;
  std::vector<double> phases;
};

struct LoScanOutcome {
  DetectionResult best;
  double lo_intensity = 0.0;
  double lo_phase = 0.0;
  double margin = 0.0;  ///< delta_g - classical_floor at the optimum
  /// Smallest grid intensity that is detectable at its best phase; empty
  /// when no grid point clears the classical floor.
  std::optional<double> min_detectable_intensity;
};

/// Evaluates delta_g22 minus the classical floor over the grid for an
/// emitter source and returns the maximizing settings. Throws
/// std::invalid_argument on an empty grid.
LoScanOutcome optimal_lo_scan(const QubitState& source, const LoGrid& grid,
                              double eta, double classical_variance);

}  // namespace fluosq
