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

#include "fluosq/detection.hpp"

#include <cmath>
#include <stdexcept>

namespace fluosq {

SignalMoments SignalMoments::from_emitter(const QubitState& q,
                                          double lo_phase) {
  SignalMoments m;
  m.intensity = q.excitation;
  m.amplitude = q.coherence * std::polar(1.0, -lo_phase);
  m.squared_amplitude = {0.0, 0.0};
  m.normally_ordered_intensity_sq = 0.0;
  return m;
}

double g22_equal_time(const SignalMoments& sig, const LocalOscillator& lo,
                      double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("g22_equal_time: eta must be in (0, 1]");
  }
  return 0.25 * eta * eta *
         (sig.normally_ordered_intensity_sq + lo.intensity * lo.intensity -
          2.0 * lo.intensity * sig.squared_amplitude.real());
}

DetectionResult delta_g22(const SignalMoments& sig, const LocalOscillator& lo,
                          double eta, double variance_sig) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("delta_g22: eta must be in (0, 1]");
  }
  const double intensity_fluct =
      sig.normally_ordered_intensity_sq - sig.intensity * sig.intensity;
  DetectionResult result;
  result.efficiency = eta;
  result.delta_g =
      0.25 * eta * eta * (intensity_fluct - lo.intensity * variance_sig);
  result.classical_floor = eta * eta * lo.intensity * lo.classical_variance;
  result.detectable = result.delta_g > result.classical_floor;
  return result;
}

LoScanOutcome optimal_lo_scan(const QubitState& source, const LoGrid& grid,
                              double eta, double classical_variance) {
  if (grid.intensities.empty() || grid.phases.empty()) {
    throw std::invalid_argument("optimal_lo_scan: empty grid");
  }

  LoScanOutcome outcome;
  bool first = true;
  for (double intensity : grid.intensities) {
    bool detectable_at_intensity = false;
    for (double phase : grid.phases) {
      const SignalMoments sig = SignalMoments::from_emitter(source, phase);
      const LocalOscillator lo{intensity, phase, classical_variance};
      const double variance = variance_at_phase(source, phase);
      const DetectionResult result = delta_g22(sig, lo, eta, variance);
      const double margin = result.delta_g - result.classical_floor;
      if (result.detectable) detectable_at_intensity = true;
      if (first || margin > outcome.margin) {
        first = false;
        outcome.best = result;
        outcome.lo_intensity = intensity;
        outcome.lo_phase = phase;
        outcome.margin = margin;
      }
    }
    if (detectable_at_intensity &&
        (!outcome.min_detectable_intensity ||
         intensity < *outcome.min_detectable_intensity)) {
      outcome.min_detectable_intensity = intensity;
    }
  }
  return outcome;
}

}  // namespace fluosq
