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

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace clocksim {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxQubits = 12;

// Basis convention: ion k (1-based) is bit k-1 of the basis index, so ion 1
// is the least significant bit. |0> is the ground state.

inline int hamming_weight(std::uint64_t basis) { return __builtin_popcountll(basis); }
inline int hamming_distance(std::uint64_t x, std::uint64_t y) { return hamming_weight(x ^ y); }

/// Throws invalid-argument unless 1 <= n <= kMaxQubits.
void check_qubit_count(int n);

/// Pure state of n ions over the computational basis.
class StateVector {
 public:
  /// Validates length 2^n and unit norm (1e-12).
  StateVector(int n, ComplexVector amps);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const ComplexVector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t basis) const { return amps_(static_cast<Eigen::Index>(basis)); }

  /// True if every amplitude has zero imaginary part.
  bool is_real() const;

 private:
  int n_;
  ComplexVector amps_;
};

/// Hermitian, unit-trace density matrix of n ions.
///
/// The constructor checks shape, Hermiticity (1e-12 elementwise) and trace
/// (1e-12). Positivity costs a full eigendecomposition and is checked on
/// demand by is_positive_semidefinite().
class DensityMatrix {
 public:
  DensityMatrix(int n, ComplexMatrix elems);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(elems_.rows()); }
  const ComplexMatrix& elements() const { return elems_; }
  Complex operator()(std::size_t row, std::size_t col) const {
    return elems_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }

  Complex trace() const { return elems_.trace(); }
  double purity() const;
  bool is_positive_semidefinite(double tolerance = 1e-10) const;

  /// Skips validation. For module code producing matrices that are valid by
  /// construction (CPTP maps applied to valid input).
  static DensityMatrix trusted(int n, ComplexMatrix elems);

 private:
  struct TrustedTag {};
  DensityMatrix(TrustedTag, int n, ComplexMatrix elems);

  int n_;
  ComplexMatrix elems_;
};

/// Initial-state expectations of the collective spin operators
/// S_x = sum_k sigma_x^k and S_y = sum_k sigma_y^k.
///
/// sxsy_mean holds the symmetrized cross moment <(S_x S_y + S_y S_x)/2>,
/// which the rotated second moment needs for complex-amplitude states. It
/// vanishes for real-amplitude states.
struct CollectiveMoments {
  int n = 0;
  double sx_mean = 0.0;
  double sx2_mean = 0.0;
  double sy_mean = 0.0;
  double sy2_mean = 0.0;
  double sxsy_mean = 0.0;

  double sx_variance() const { return sx2_mean - sx_mean * sx_mean; }
  double sy_variance() const { return sy2_mean - sy_mean * sy_mean; }
};

StateVector product_superposition(int n);
StateVector ghz(int n);

/// Number of coefficients a_0..a_{floor(n/2)} of the symmetric family.
inline std::size_t symmetric_coeff_count(int n) { return static_cast<std::size_t>(n / 2 + 1); }

/// Number of basis strings with Hamming weight k or n-k.
std::size_t symmetric_class_size(int n, int k);

/// State sum_k a_k |k>, where |k> is the normalized equal superposition of
/// all strings with k or n-k excitations.
///
/// Coefficients whose squared norm is within 1e-9 of one are renormalized;
/// anything further off is rejected.
StateVector symmetric_state(int n, std::span<const double> a);

/// Coefficients of product_superposition(n) inside the symmetric family.
std::vector<double> uncorrelated_coeffs(int n);

/// Prepares GHZ with a Ramsey pulse on ion 1 followed by CNOTs from ion 1
/// to each other ion.
StateVector ghz_via_network(int n);

CollectiveMoments collective_moments(const StateVector& psi);

DensityMatrix to_density(const StateVector& psi);

namespace circuit {

/// pi/2 rotation about y: |0> -> (|0>+|1>)/sqrt2, |1> -> (-|0>+|1>)/sqrt2.
Eigen::Matrix2cd ramsey_pulse();

void apply_single_qubit(ComplexVector& state, int qubit, const Eigen::Matrix2cd& gate);
void apply_cnot(ComplexVector& state, int control, int target);

/// rho -> G rho G^dagger for a gate on one qubit.
void apply_single_qubit(ComplexMatrix& rho, int qubit, const Eigen::Matrix2cd& gate);
void apply_cnot(ComplexMatrix& rho, int control, int target);

/// Probability that the given qubit is found in |1>.
double excited_population(const ComplexMatrix& rho, int qubit);

}  // namespace circuit

}  // namespace clocksim
