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

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "clocksim/qstate.hpp"

namespace clocksim {

/// Eigenvalue-sum cutoff for the symmetric logarithmic derivative. Pairs of
/// eigenvalues of rho with lambda_j + lambda_k <= this are left out of the
/// SLD; dephased states are routinely rank deficient.
inline constexpr double kSldCutoff = 1e-12;

/// A complete projective measurement {Pi_m}. Each projector is stored as a
/// group of orthonormal columns of one basis matrix.
class ProjectiveMeasurement {
 public:
  /// One rank-1 projector per column. Throws invalid-argument unless the
  /// columns form an orthonormal basis (1e-10).
  static ProjectiveMeasurement from_basis(ComplexMatrix basis);

  /// Arbitrary-rank projectors. Throws invalid-argument unless each is a
  /// Hermitian idempotent and they sum to the identity (1e-10).
  static ProjectiveMeasurement from_projectors(const std::vector<ComplexMatrix>& projectors);

  std::size_t outcome_count() const { return groups_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(basis_.rows()); }
  const ComplexMatrix& basis() const { return basis_; }
  /// Column indices spanning outcome m.
  const std::vector<Eigen::Index>& columns(std::size_t m) const { return groups_[m]; }

  ComplexMatrix projector(std::size_t m) const;

 private:
  ProjectiveMeasurement(ComplexMatrix basis, std::vector<std::vector<Eigen::Index>> groups);

  ComplexMatrix basis_;
  std::vector<std::vector<Eigen::Index>> groups_;
};

/// Eigendecomposition of the SLD, ascending eigenvalues. Each eigenvector
/// is phase-fixed so its first non-negligible component is real positive.
struct SldBasis {
  Eigen::VectorXd eigenvalues;
  ComplexMatrix eigenvectors;
};

struct QfiResult {
  double qfi = 0.0;
  SldBasis sld_eigenbasis;
  // Fisher information of measuring the SLD eigenbasis; +inf when drho has
  // weight outside the support of rho.
  double classical_fi_check = 0.0;
};

/// Quantum Fisher information
///   F_Q = sum_{lambda_j + lambda_k > cutoff} 2 |<j|drho|k>|^2 / (lambda_j + lambda_k)
/// over the eigenpairs of rho, together with the SLD eigenbasis (the optimal
/// projective measurement) and its classical Fisher information.
///
/// Throws invalid-argument if drho is not Hermitian and trace-free or its
/// shape does not match rho.
QfiResult qfi(const DensityMatrix& rho, const ComplexMatrix& drho);

/// Frequency uncertainty 1/sqrt((T/t) F_Q) for T/t repetitions. Throws
/// no-information when F_Q == 0.
double qfi_uncertainty(double qfi_per_shot, double total_time, double shot_time);

/// Classical Fisher information sum_m (dp_m)^2 / p_m of a projective
/// measurement, with p_m = Tr(Pi_m rho) and dp_m = Tr(Pi_m drho).
///
/// Outcomes with p_m < 1e-15 and |dp_m| < 1e-12 are skipped; p_m < 1e-15
/// with a larger derivative throws singular-outcome.
double classical_fi(const DensityMatrix& rho, const ComplexMatrix& drho,
                    const ProjectiveMeasurement& measurement);

/// Phase QFI of a dephased symmetric preparation, as a function of (gamma, t).
///
/// For a real preparation invariant under the global bit flip, rho(t) is
/// real and commutes with X^{(x)n}, while the phase generator swaps the two
/// parity sectors. The QFI then reduces to two real symmetric
/// eigendecompositions of half dimension. Agrees with qfi() on
/// dephase_evolve / drho_ddelta output; the value does not depend on delta.
class SymmetricPhaseQfi {
 public:
  /// Throws invalid-argument unless psi is real and bit-flip symmetric.
  explicit SymmetricPhaseQfi(const StateVector& psi);

  int num_qubits() const { return n_; }
  double operator()(double gamma, double t) const;

 private:
  int n_;
  Eigen::Index half_;
  Eigen::VectorXd amps_;       // psi on representatives (top bit clear)
  Eigen::VectorXd generator_;  // h(x) - n/2 on representatives
  std::vector<std::uint8_t> distance_;
};

}  // namespace clocksim
