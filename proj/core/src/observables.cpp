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

#include "fluosq/observables.hpp"

#include <cmath>
#include <numbers>

namespace fluosq {

namespace {

// Reduce an angle to [0, pi); the variance is pi-periodic in the phase.
double fold_phase(double phi) {
  double folded = std::fmod(phi, std::numbers::pi);
  if (folded < 0.0) folded += std::numbers::pi;
  if (folded >= std::numbers::pi) folded -= std::numbers::pi;
  return folded;
}

}  // namespace

bool QubitState::is_physical(double slack) const {
  if (!std::isfinite(excitation) || !std::isfinite(std::abs(coherence))) {
    return false;
  }
  if (excitation < -slack || excitation > 1.0 + slack) return false;
  return std::norm(coherence) <= excitation * (1.0 - excitation) + slack;
}

double variance_at_phase(const QubitState& state, double phase) {
  const std::complex<double> c = state.coherence;
  const std::complex<double> rot = std::polar(1.0, -2.0 * phase);
  return 2.0 * (state.excitation - std::norm(c) - std::real(c * c * rot));
}

SqueezingReport optimize_phase(const QubitState& state) {
  SqueezingReport report;
  const double c2 = std::norm(state.coherence);
  report.var_min = 2.0 * (state.excitation - 2.0 * c2);
  report.var_max = 2.0 * state.excitation;
  report.purity = purity(state);
  if (c2 > 0.0) {
    // The variance is extremal where e^{-2 i phi} aligns with the conjugate
    // of coherence^2: minimal at arg(coherence) mod pi, maximal a quarter
    // period away.
    const double theta = std::arg(state.coherence);
    report.phase_min = fold_phase(theta);
    report.phase_max = fold_phase(theta + 0.5 * std::numbers::pi);
  }
  return report;
}

double purity(const QubitState& state) {
  const double e = state.excitation;
  return 1.0 - 2.0 * (e - e * e - std::norm(state.coherence));
}

double variance_envelope(double excitation) {
  return 2.0 * excitation * (2.0 * excitation - 1.0);
}

}  // namespace fluosq
