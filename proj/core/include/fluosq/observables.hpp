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

namespace fluosq {

/// Minimal two-level emitter state entering every squeezing formula:
/// the excited-state occupation <A22> and the lowering-operator average
/// <A12>. The remaining matrix elements follow from trace and Hermiticity.
struct QubitState {
  double excitation = 0.0;                ///< <A22>, in [0, 1]
  std::complex<double> coherence{0, 0};   ///< <A12>

  /// Positive semi-definiteness: |<A12>|^2 <= <A22>(1 - <A22>), plus
  /// 0 <= <A22> <= 1, allowing `slack` of numerical noise.
  bool is_physical(double slack = 1e-10) const;
};

/// Phase-optimized, normally ordered field variances of the emitted
/// fluorescence. Variances are in units of the squared field-strength
/// scale of the source field, which is fixed to 1 throughout; phases are
/// reduced modulo pi (the variance has period pi).
struct SqueezingReport {
  double var_min = 0.0;
  double var_max = 0.0;
  /// Quadrature phase of minimal variance, in [0, pi). Empty when the
  /// coherence vanishes: the variance is then phase-independent and the
  /// optimizing phase is undefined rather than 0.
  std::optional<double> phase_min;
  std::optional<double> phase_max;
  double purity = 1.0;
};

/// Normally ordered variance of the source field at quadrature phase
/// `phase`: 2 [ <A22> - |<A12>|^2 - Re{<A12>^2 e^{-2 i phase}} ].
double variance_at_phase(const QubitState& state, double phase);

/// Extremal variances over the quadrature phase together with the
/// optimizing phases and the state purity. var_min = 2(<A22> - 2|<A12>|^2),
/// var_max = 2 <A22>.
SqueezingReport optimize_phase(const QubitState& state);

/// Tr{sigma^2} = 1 - 2(<A22> - <A22>^2 - |<A12>|^2), in [1/2, 1].
double purity(const QubitState& state);

/// Minimal variance attainable at a given excitation, reached at maximal
/// coherence: 2 e (2e - 1). Its absolute minimum is -1/4 at e = 1/4.
double variance_envelope(double excitation);

}  // namespace fluosq
