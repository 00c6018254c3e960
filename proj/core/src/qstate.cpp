// Copyright 2026 The clocksim Authors
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

#include "clocksim/qstate.hpp"

#include <cmath>
#include <string>

#include "clocksim/error.hpp"

namespace clocksim {
namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kCoeffNormTolerance = 1e-9;

std::size_t basis_dim(int n) { return std::size_t{1} << n; }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return std::round(result);
}

// Column-wise application of a single-qubit gate: rows of the matrix are
// basis states.
template <typename Derived>
void apply_gate_rows(Eigen::MatrixBase<Derived>& m, int qubit, const Eigen::Matrix2cd& g) {
  const Eigen::Index dim = m.rows();
  const Eigen::Index mask = Eigen::Index{1} << qubit;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i & mask) continue;
    const Eigen::Index j = i | mask;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex a0 = m(i, c);
      const Complex a1 = m(j, c);
      m(i, c) = g(0, 0) * a0 + g(0, 1) * a1;
      m(j, c) = g(1, 0) * a0 + g(1, 1) * a1;
    }
  }
}

template <typename Derived>
void apply_cnot_rows(Eigen::MatrixBase<Derived>& m, int control, int target) {
  const Eigen::Index dim = m.rows();
  const Eigen::Index cmask = Eigen::Index{1} << control;
  const Eigen::Index tmask = Eigen::Index{1} << target;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!(i & cmask) || (i & tmask)) continue;
    m.row(i).swap(m.row(i | tmask));
  }
}

}  // namespace

void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw_invalid_argument("qubit count must lie in [1, " + std::to_string(kMaxQubits) +
                           "], got " + std::to_string(n));
  }
}

StateVector::StateVector(int n, ComplexVector amps) : n_(n), amps_(std::move(amps)) {
  check_qubit_count(n);
  if (static_cast<std::size_t>(amps_.size()) != basis_dim(n)) {
    throw_invalid_argument("state vector length must be 2^n");
  }
  if (!amps_.allFinite()) throw_invalid_argument("state vector has non-finite amplitudes");
  const double norm2 = amps_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kNormTolerance) {
    throw_invalid_argument("state vector is not normalized (|psi|^2 = " + std::to_string(norm2) +
                           ")");
  }
}

bool StateVector::is_real() const {
  return (amps_.imag().array() == 0.0).all();
}

DensityMatrix::DensityMatrix(int n, ComplexMatrix elems) : n_(n), elems_(std::move(elems)) {
  check_qubit_count(n);
  const auto dim = static_cast<Eigen::Index>(basis_dim(n));
  if (elems_.rows() != dim || elems_.cols() != dim) {
    throw_invalid_argument("density matrix must be 2^n x 2^n");
  }
  if (!elems_.allFinite()) throw_invalid_argument("density matrix has non-finite entries");
  if ((elems_ - elems_.adjoint()).cwiseAbs().maxCoeff() > kNormTolerance) {
    throw_invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(elems_.trace() - Complex{1.0, 0.0}) > kNormTolerance) {
    throw_invalid_argument("density matrix trace differs from one");
  }
}

DensityMatrix::DensityMatrix(TrustedTag, int n, ComplexMatrix elems)
    : n_(n), elems_(std::move(elems)) {}

DensityMatrix DensityMatrix::trusted(int n, ComplexMatrix elems) {
  return DensityMatrix(TrustedTag{}, n, std::move(elems));
}

double DensityMatrix::purity() const {
  // trace(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return elems_.squaredNorm();
}

bool DensityMatrix::is_positive_semidefinite(double tolerance) const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(elems_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tolerance;
}

StateVector product_superposition(int n) {
  check_qubit_count(n);
  const std::size_t dim = basis_dim(n);
  const double amp = std::pow(2.0, -0.5 * n);
  return StateVector(n, ComplexVector::Constant(static_cast<Eigen::Index>(dim), Complex{amp, 0.0}));
}

StateVector ghz(int n) {
  check_qubit_count(n);
  const auto dim = static_cast<Eigen::Index>(basis_dim(n));
  ComplexVector amps = ComplexVector::Zero(dim);
  amps(0) = M_SQRT1_2;
  amps(dim - 1) = M_SQRT1_2;
  return StateVector(n, std::move(amps));
}

std::size_t symmetric_class_size(int n, int k) {
  if (k < 0 || 2 * k > n) throw_invalid_argument("symmetric class index out of range");
  const double c = binomial(n, k);
  return static_cast<std::size_t>(2 * k == n ? c : 2.0 * c);
}

StateVector symmetric_state(int n, std::span<const double> a) {
  check_qubit_count(n);
  if (a.size() != symmetric_coeff_count(n)) {
    throw_invalid_argument("symmetric family with n=" + std::to_string(n) + " needs " +
                           std::to_string(symmetric_coeff_count(n)) + " coefficients, got " +
                           std::to_string(a.size()));
  }
  double norm2 = 0.0;
  for (double ak : a) {
    if (!std::isfinite(ak)) throw_invalid_argument("non-finite symmetric coefficient");
    norm2 += ak * ak;
  }
  if (std::abs(norm2 - 1.0) > kCoeffNormTolerance) {
    throw_invalid_argument("symmetric coefficients must have unit norm (sum a_k^2 = " +
                           std::to_string(norm2) + ")");
  }
  const double scale = 1.0 / std::sqrt(norm2);

  std::vector<double> class_amp(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    class_amp[k] = scale * a[k] / std::sqrt(static_cast<double>(symmetric_class_size(n, int(k))));
  }

  const std::size_t dim = basis_dim(n);
  ComplexVector amps(static_cast<Eigen::Index>(dim));
  for (std::size_t x = 0; x < dim; ++x) {
    const int w = hamming_weight(x);
    amps(static_cast<Eigen::Index>(x)) = class_amp[static_cast<std::size_t>(std::min(w, n - w))];
  }
  // Renormalize once more so rounding in the class amplitudes stays far below
  // the StateVector tolerance.
  amps /= amps.norm();
  return StateVector(n, std::move(amps));
}

std::vector<double> uncorrelated_coeffs(int n) {
  check_qubit_count(n);
  std::vector<double> a(symmetric_coeff_count(n));
  const double amp = std::pow(2.0, -0.5 * n);
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = amp * std::sqrt(static_cast<double>(symmetric_class_size(n, int(k))));
  }
  return a;
}

StateVector ghz_via_network(int n) {
  check_qubit_count(n);
  ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(basis_dim(n)));
  amps(0) = 1.0;
  circuit::apply_single_qubit(amps, 0, circuit::ramsey_pulse());
  for (int target = 1; target < n; ++target) circuit::apply_cnot(amps, 0, target);
  return StateVector(n, std::move(amps));
}

CollectiveMoments collective_moments(const StateVector& psi) {
  const int n = psi.num_qubits();
  const ComplexVector& amps = psi.amplitudes();
  const Eigen::Index dim = amps.size();
  const Complex i_unit{0.0, 1.0};

  ComplexVector sx_psi = ComplexVector::Zero(dim);
  ComplexVector sy_psi = ComplexVector::Zero(dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    for (int k = 0; k < n; ++k) {
      const Eigen::Index flipped = x ^ (Eigen::Index{1} << k);
      sx_psi(x) += amps(flipped);
      // sigma_y |0> = i|1>, sigma_y |1> = -i|0>
      sy_psi(x) += ((x >> k) & 1 ? i_unit : -i_unit) * amps(flipped);
    }
  }

  CollectiveMoments m;
  m.n = n;
  m.sx_mean = amps.dot(sx_psi).real();
  m.sx2_mean = sx_psi.squaredNorm();
  m.sy_mean = amps.dot(sy_psi).real();
  m.sy2_mean = sy_psi.squaredNorm();
  m.sxsy_mean = sx_psi.dot(sy_psi).real();
  return m;
}

DensityMatrix to_density(const StateVector& psi) {
  const ComplexVector& amps = psi.amplitudes();
  return DensityMatrix::trusted(psi.num_qubits(), amps * amps.adjoint());
}

namespace circuit {

Eigen::Matrix2cd ramsey_pulse() {
  Eigen::Matrix2cd g;
  g << M_SQRT1_2, -M_SQRT1_2,
       M_SQRT1_2, M_SQRT1_2;
  return g;
}

void apply_single_qubit(ComplexVector& state, int qubit, const Eigen::Matrix2cd& gate) {
  apply_gate_rows(state, qubit, gate);
}

void apply_cnot(ComplexVector& state, int control, int target) {
  apply_cnot_rows(state, control, target);
}

void apply_single_qubit(ComplexMatrix& rho, int qubit, const Eigen::Matrix2cd& gate) {
  apply_gate_rows(rho, qubit, gate);
  rho.adjointInPlace();
  apply_gate_rows(rho, qubit, gate);
  rho.adjointInPlace();
}

void apply_cnot(ComplexMatrix& rho, int control, int target) {
  apply_cnot_rows(rho, control, target);
  rho.adjointInPlace();
  apply_cnot_rows(rho, control, target);
  rho.adjointInPlace();
}

double excited_population(const ComplexMatrix& rho, int qubit) {
  const Eigen::Index mask = Eigen::Index{1} << qubit;
  double p = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    if (i & mask) p += rho(i, i).real();
  }
  return p;
}

}  // namespace circuit
}  // namespace clocksim
