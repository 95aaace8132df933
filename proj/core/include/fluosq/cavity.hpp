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

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <iosfwd>
#include <stdexcept>

#include "fluosq/observables.hpp"
#include "fluosq/params.hpp"

namespace fluosq {

using SparseMatrixXcd = Eigen::SparseMatrix<std::complex<double>>;

/// Linear solve failed or the steady state is not uniquely determined.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Generator of the dissipative emitter-cavity dynamics on the Fock space
/// truncated at photon number n_max, acting on the row-major vectorized
/// density matrix.
///
/// Index layout (fixed, so entry-level golden tests stay stable): basis
/// states |n, i> with cavity photon number n in [0, n_max] and emitter
/// level i in {1, 2} are enumerated as h(n, i) = 2n + (i - 1); the
/// vectorized element rho_{n,i;m,j} sits at k = h(n,i) * 2(n_max+1) + h(m,j).
struct Liouvillian {
  int n_max = 0;

  /// Full singular generator, dimension [2(n_max+1)]^2.
  SparseMatrixXcd generator;

  /// Trace-eliminated coefficient matrix: the element rho_{0,1;0,1}
  /// (k = 0) is removed using Tr rho = 1, leaving 4(n_max+1)^2 - 1
  /// unknowns. coefficients * x = inhomogeneity determines the steady
  /// state; the eliminated element is reconstructed from the trace.
  SparseMatrixXcd coefficients;
  Eigen::VectorXcd inhomogeneity;
};

/// Assembles the generator for the driven emitter coupled to the lossy
/// cavity, including the optional dephasing, emitter-pump, and cavity-pump
/// channels. Throws std::invalid_argument for n_max < 1 or invalid params.
Liouvillian build_liouvillian(const SystemParams& p, int n_max);

/// Steady-state density matrix at fixed truncation plus the moments every
/// downstream module consumes.
struct JointState {
  int n_max = 0;
  Eigen::MatrixXcd rho;  ///< dimension 2(n_max+1), basis index h(n,i)

  double excitation = 0.0;                   ///< <A22>
  std::complex<double> coherence{0, 0};      ///< <A12>
  std::complex<double> field{0, 0};          ///< <a>
  double photon_number = 0.0;                ///< <a^dag a>
  std::complex<double> excited_field{0, 0};  ///< <A22 a>

  /// Reduced emitter state (cavity traced out).
  QubitState qubit() const { return {excitation, coherence}; }

  double trace_error() const;        ///< |Tr rho - 1|
  double hermiticity_error() const;  ///< max |rho - rho^dag|
  double min_eigenvalue() const;     ///< smallest eigenvalue of (rho+rho^dag)/2
};

/// Solves the trace-eliminated linear system at fixed truncation.
/// Throws SolverError when the factorization fails (degenerate parameters).
JointState solve_steady_state(const SystemParams& p, int n_max);

/// Max-abs norm of the full generator applied to the vectorized solution;
/// the steady-state defect of `state` under `liou`.
double generator_residual(const Liouvillian& liou, const JointState& state);

struct SolveReport {
  JointState state;
  int n_used = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Solves at truncations n = 2, 4, 8, ... (doubling, capped at n_cap)
/// until every tracked moment (<A22>, <A12>, <a>, <a^dag a>, <A22 a>)
/// changes by less than tol between consecutive truncations. A report with
/// converged = false is returned when the cap is exhausted; it is never
/// silently hidden.
SolveReport converged_steady_state(const SystemParams& p, double tol = 1e-8,
                                   int n_cap = 64);

/// Steady-state operator identities of the base system (gamma_d = p_x =
/// p_c = 0); each residual must vanish to solver accuracy on a converged
/// solve, independent of parameters:
///   [0] |<a> + i g <A12> / (i delta_c + kappa/2)|
///   [1] |(i delta_x + gamma/2) <A12> - i g (2 <A22 a> - <a>)
///        + i rabi (1 - 2 <A22>)|
///   [2] |<A22> - (2 rabi / gamma) Im <A21> + (kappa / gamma) <a^dag a>|
std::array<double, 3> exact_relation_residuals(const JointState& state,
                                               const SystemParams& p);

/// Writes a sparse matrix as coordinate-format text, one entry per line:
/// "row col re im" (0-based indices, full precision).
void write_coordinate_matrix(const SparseMatrixXcd& m, std::ostream& out);

/// Writes a dense complex vector as "row re im" lines.
void write_coordinate_vector(const Eigen::VectorXcd& v, std::ostream& out);

}  // namespace fluosq
