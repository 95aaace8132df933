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

#include "fluosq/cavity.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <ostream>
#include <vector>

namespace fluosq {

namespace {

using std::complex;
using Triplet = Eigen::Triplet<complex<double>>;

constexpr complex<double> kI{0.0, 1.0};

int hilbert_dim(int n_max) { return 2 * (n_max + 1); }

// Basis index of |n, i>, i in {1, 2}: h = 2n + (i - 1).
int basis_index(int n, int i) { return 2 * n + (i - 1); }

SparseMatrixXcd annihilation_op(int n_max) {
  const int dim = hilbert_dim(n_max);
  std::vector<Triplet> entries;
  for (int n = 1; n <= n_max; ++n) {
    for (int i = 1; i <= 2; ++i) {
      entries.emplace_back(basis_index(n - 1, i), basis_index(n, i),
                           std::sqrt(static_cast<double>(n)));
    }
  }
  SparseMatrixXcd a(dim, dim);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

SparseMatrixXcd lowering_op(int n_max) {
  const int dim = hilbert_dim(n_max);
  std::vector<Triplet> entries;
  for (int n = 0; n <= n_max; ++n) {
    entries.emplace_back(basis_index(n, 1), basis_index(n, 2), 1.0);
  }
  SparseMatrixXcd a12(dim, dim);
  a12.setFromTriplets(entries.begin(), entries.end());
  return a12;
}

SparseMatrixXcd excited_projector(int n_max) {
  const int dim = hilbert_dim(n_max);
  std::vector<Triplet> entries;
  for (int n = 0; n <= n_max; ++n) {
    entries.emplace_back(basis_index(n, 2), basis_index(n, 2), 1.0);
  }
  SparseMatrixXcd a22(dim, dim);
  a22.setFromTriplets(entries.begin(), entries.end());
  return a22;
}

SparseMatrixXcd identity_op(int dim) {
  SparseMatrixXcd id(dim, dim);
  id.setIdentity();
  return id;
}

// Row-major vectorization: vec(A rho B) = (A kron B^T) vec(rho).
SparseMatrixXcd left_right(const SparseMatrixXcd& a, const SparseMatrixXcd& b) {
  SparseMatrixXcd bt = b.transpose();
  return Eigen::kroneckerProduct(a, bt).eval();
}

// Dissipator (rate/2)(2 O rho O^dag - {O^dag O, rho}) as a superoperator.
SparseMatrixXcd dissipator(double rate, const SparseMatrixXcd& op,
                           const SparseMatrixXcd& id) {
  SparseMatrixXcd op_dag = op.adjoint();
  SparseMatrixXcd op_dag_op = (op_dag * op).pruned();
  SparseMatrixXcd result =
      2.0 * left_right(op, op_dag) - left_right(op_dag_op, id) -
      left_right(id, op_dag_op);
  return (0.5 * rate * result).pruned();
}

}  // namespace

Liouvillian build_liouvillian(const SystemParams& p, int n_max) {
  p.validate();
  if (n_max < 1) {
    throw std::invalid_argument("build_liouvillian: n_max must be >= 1");
  }

  const int dim = hilbert_dim(n_max);
  const SparseMatrixXcd a = annihilation_op(n_max);
  const SparseMatrixXcd a_dag = a.adjoint();
  const SparseMatrixXcd a12 = lowering_op(n_max);
  const SparseMatrixXcd a21 = a12.adjoint();
  const SparseMatrixXcd a22 = excited_projector(n_max);
  const SparseMatrixXcd id = identity_op(dim);

  SparseMatrixXcd h =
      (p.delta_x * a22 + p.rabi * (a12 + a21) + p.delta_c * (a_dag * a) +
       p.g * (a_dag * a12 + a21 * a))
          .pruned();

  Liouvillian liou;
  liou.n_max = n_max;
  liou.generator =
      (-kI * (left_right(h, id) - left_right(id, h)) +
       dissipator(p.gamma, a12, id) + dissipator(p.kappa, a, id))
          .pruned();
  if (p.gamma_d > 0.0) liou.generator += dissipator(p.gamma_d, a22, id);
  if (p.p_x > 0.0) liou.generator += dissipator(p.p_x, a21, id);
  if (p.p_c > 0.0) liou.generator += dissipator(p.p_c, a_dag, id);

  // Trace elimination: the unknown rho_{0,1;0,1} (flat index 0) is replaced
  // by 1 - sum of the remaining diagonal elements. Column 0 of the
  // generator turns into the inhomogeneity and is subtracted from every
  // remaining diagonal column; row 0 is dropped as redundant.
  const int full = dim * dim;
  const Eigen::VectorXcd column0 = liou.generator.col(0);
  std::vector<Triplet> reduced;
  reduced.reserve(static_cast<size_t>(liou.generator.nonZeros()));
  for (int outer = 0; outer < liou.generator.outerSize(); ++outer) {
    for (SparseMatrixXcd::InnerIterator it(liou.generator, outer); it; ++it) {
      if (it.row() == 0 || it.col() == 0) continue;
      reduced.emplace_back(it.row() - 1, it.col() - 1, it.value());
    }
  }
  for (int h_idx = 1; h_idx < dim; ++h_idx) {
    const int diag_col = h_idx * dim + h_idx;
    for (int r = 1; r < full; ++r) {
      if (column0(r) != 0.0) {
        reduced.emplace_back(r - 1, diag_col - 1, -column0(r));
      }
    }
  }
  liou.coefficients.resize(full - 1, full - 1);
  liou.coefficients.setFromTriplets(reduced.begin(), reduced.end());
  liou.inhomogeneity = -column0.tail(full - 1);
  return liou;
}

namespace {

void fill_moments(JointState& state) {
  const int n_max = state.n_max;
  const Eigen::MatrixXcd& rho = state.rho;
  double excitation = 0.0;
  double photons = 0.0;
  complex<double> coherence{0, 0};
  complex<double> field{0, 0};
  complex<double> excited_field{0, 0};
  for (int n = 0; n <= n_max; ++n) {
    excitation += std::real(rho(basis_index(n, 2), basis_index(n, 2)));
    coherence += rho(basis_index(n, 2), basis_index(n, 1));
    for (int i = 1; i <= 2; ++i) {
      photons += n * std::real(rho(basis_index(n, i), basis_index(n, i)));
      if (n >= 1) {
        field += std::sqrt(static_cast<double>(n)) *
                 rho(basis_index(n, i), basis_index(n - 1, i));
      }
    }
    if (n >= 1) {
      excited_field += std::sqrt(static_cast<double>(n)) *
                       rho(basis_index(n, 2), basis_index(n - 1, 2));
    }
  }
  state.excitation = excitation;
  state.coherence = coherence;
  state.field = field;
  state.photon_number = photons;
  state.excited_field = excited_field;
}

JointState state_from_solution(const Liouvillian& liou,
                               const Eigen::VectorXcd& x) {
  const int dim = hilbert_dim(liou.n_max);
  Eigen::VectorXcd full(dim * dim);
  full.tail(dim * dim - 1) = x;
  complex<double> diag_sum{0, 0};
  for (int h = 1; h < dim; ++h) diag_sum += x(h * dim + h - 1);
  full(0) = 1.0 - diag_sum;

  JointState state;
  state.n_max = liou.n_max;
  state.rho = Eigen::Map<const Eigen::Matrix<complex<double>, Eigen::Dynamic,
                                             Eigen::Dynamic, Eigen::RowMajor>>(
      full.data(), dim, dim);
  fill_moments(state);
  return state;
}

}  // namespace

JointState solve_steady_state(const SystemParams& p, int n_max) {
  const Liouvillian liou = build_liouvillian(p, n_max);
  Eigen::SparseLU<SparseMatrixXcd> lu;
  lu.compute(liou.coefficients);
  if (lu.info() != Eigen::Success) {
    throw SolverError(
        "steady-state factorization failed (degenerate parameters?)");
  }
  const Eigen::VectorXcd x = lu.solve(liou.inhomogeneity);
  if (lu.info() != Eigen::Success) {
    throw SolverError("steady-state solve failed");
  }
  return state_from_solution(liou, x);
}

double generator_residual(const Liouvillian& liou, const JointState& state) {
  const int dim = hilbert_dim(liou.n_max);
  Eigen::Matrix<complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                Eigen::RowMajor>
      row_major = state.rho;
  Eigen::Map<const Eigen::VectorXcd> flat(row_major.data(), dim * dim);
  return (liou.generator * flat).cwiseAbs().maxCoeff();
}

SolveReport converged_steady_state(const SystemParams& p, double tol,
                                   int n_cap) {
  p.validate();
  if (!(tol > 0.0)) {
    throw std::invalid_argument("converged_steady_state: tol must be > 0");
  }
  if (n_cap < 1) {
    throw std::invalid_argument("converged_steady_state: n_cap must be >= 1");
  }

  SolveReport report;
  bool have_previous = false;
  std::array<complex<double>, 5> previous{};
  for (int n = std::min(2, n_cap); n <= n_cap; n *= 2) {
    JointState state = solve_steady_state(p, n);
    const std::array<complex<double>, 5> tracked{
        complex<double>(state.excitation, 0.0), state.coherence, state.field,
        complex<double>(state.photon_number, 0.0), state.excited_field};
    report.state = std::move(state);
    report.n_used = n;
    if (have_previous) {
      double change = 0.0;
      for (size_t k = 0; k < tracked.size(); ++k) {
        change = std::max(change, std::abs(tracked[k] - previous[k]));
      }
      if (change < tol) {
        report.converged = true;
        break;
      }
    }
    previous = tracked;
    have_previous = true;
  }
  report.residual =
      generator_residual(build_liouvillian(p, report.n_used), report.state);
  if (report.converged && !(report.residual <= tol)) report.converged = false;
  return report;
}

std::array<double, 3> exact_relation_residuals(const JointState& state,
                                               const SystemParams& p) {
  const complex<double> purcell =
      -kI * p.g / (kI * p.delta_c + 0.5 * p.kappa);
  const double r0 = std::abs(state.field - purcell * state.coherence);

  const complex<double> lhs =
      (kI * p.delta_x + 0.5 * p.gamma) * state.coherence;
  const complex<double> rhs =
      kI * p.g * (2.0 * state.excited_field - state.field) -
      kI * p.rabi * (1.0 - 2.0 * state.excitation);
  const double r1 = std::abs(lhs - rhs);

  // <A21> = conj(<A12>), so Im <A21> = -Im <A12>.
  const double r2 = std::abs(state.excitation +
                             (2.0 * p.rabi / p.gamma) * state.coherence.imag() +
                             (p.kappa / p.gamma) * state.photon_number);
  return {r0, r1, r2};
}

double JointState::trace_error() const {
  return std::abs(rho.trace() - complex<double>(1.0, 0.0));
}

double JointState::hermiticity_error() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double JointState::min_eigenvalue() const {
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm,
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void write_coordinate_matrix(const SparseMatrixXcd& m, std::ostream& out) {
  char line[128];
  for (int outer = 0; outer < m.outerSize(); ++outer) {
    for (SparseMatrixXcd::InnerIterator it(m, outer); it; ++it) {
      std::snprintf(line, sizeof(line), "%ld %ld %.17g %.17g\n",
                    static_cast<long>(it.row()), static_cast<long>(it.col()),
                    it.value().real(), it.value().imag());
      out << line;
    }
  }
}

void write_coordinate_vector(const Eigen::VectorXcd& v, std::ostream& out) {
  char line[128];
  for (Eigen::Index r = 0; r < v.size(); ++r) {
    std::snprintf(line, sizeof(line), "%ld %.17g %.17g\n", static_cast<long>(r),
                  v(r).real(), v(r).imag());
    out << line;
  }
}

}  // namespace fluosq
