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

#include "clocksim/fisher.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "clocksim/error.hpp"

namespace clocksim {
namespace {

constexpr double kProjectorTolerance = 1e-10;
constexpr double kHermitianTolerance = 1e-10;
constexpr double kZeroProbability = 1e-15;
constexpr double kZeroProbabilityDerivative = 1e-12;

double scale_of(const ComplexMatrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

void fix_phases(ComplexMatrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    auto col = vectors.col(c);
    const double largest = col.cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      const double mag = std::abs(col(r));
      if (mag > 1e-8 * largest) {
        col *= std::conj(col(r)) / mag;
        break;
      }
    }
  }
}

}  // namespace

ProjectiveMeasurement::ProjectiveMeasurement(ComplexMatrix basis,
                                             std::vector<std::vector<Eigen::Index>> groups)
    : basis_(std::move(basis)), groups_(std::move(groups)) {}

ProjectiveMeasurement ProjectiveMeasurement::from_basis(ComplexMatrix basis) {
  if (basis.rows() != basis.cols() || basis.rows() == 0) {
    throw_invalid_argument("measurement basis must be a non-empty square matrix");
  }
  const Eigen::Index d = basis.rows();
  const double defect = (basis.adjoint() * basis - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (!(defect <= kProjectorTolerance)) {
    throw_invalid_argument("measurement basis is not orthonormal and complete");
  }
  std::vector<std::vector<Eigen::Index>> groups(static_cast<std::size_t>(d));
  for (Eigen::Index c = 0; c < d; ++c) groups[static_cast<std::size_t>(c)] = {c};
  return ProjectiveMeasurement(std::move(basis), std::move(groups));
}

ProjectiveMeasurement ProjectiveMeasurement::from_projectors(
    const std::vector<ComplexMatrix>& projectors) {
  if (projectors.empty()) throw_invalid_argument("measurement needs at least one projector");
  const Eigen::Index d = projectors.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  ComplexMatrix basis(d, d);
  std::vector<std::vector<Eigen::Index>> groups;
  Eigen::Index filled = 0;
  for (const auto& p : projectors) {
    if (p.rows() != d || p.cols() != d) throw_invalid_argument("projector shapes differ");
    if ((p - p.adjoint()).cwiseAbs().maxCoeff() > kProjectorTolerance ||
        (p * p - p).cwiseAbs().maxCoeff() > kProjectorTolerance) {
      throw_invalid_argument("measurement operator is not an orthogonal projector");
    }
    sum += p;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(p);
    std::vector<Eigen::Index> group;
    for (Eigen::Index c = 0; c < d; ++c) {
      if (solver.eigenvalues()(c) < 0.5) continue;
      if (filled == d) throw_invalid_argument("projector ranks exceed the dimension");
      basis.col(filled) = solver.eigenvectors().col(c);
      group.push_back(filled++);
    }
    groups.push_back(std::move(group));
  }
  if ((sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kProjectorTolerance ||
      filled != d) {
    throw_invalid_argument("projectors do not sum to the identity");
  }
  return ProjectiveMeasurement(std::move(basis), std::move(groups));
}

ComplexMatrix ProjectiveMeasurement::projector(std::size_t m) const {
  ComplexMatrix p = ComplexMatrix::Zero(basis_.rows(), basis_.rows());
  for (Eigen::Index c : groups_[m]) p += basis_.col(c) * basis_.col(c).adjoint();
  return p;
}

QfiResult qfi(const DensityMatrix& rho, const ComplexMatrix& drho) {
  const ComplexMatrix& r = rho.elements();
  if (drho.rows() != r.rows() || drho.cols() != r.cols()) {
    throw_invalid_argument("derivative shape does not match the density matrix");
  }
  if (!drho.allFinite()) throw_invalid_argument("derivative has non-finite entries");
  const double tol = kHermitianTolerance * scale_of(drho);
  if ((r - r.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
    throw_invalid_argument("density matrix is not Hermitian");
  }
  if ((drho - drho.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw_invalid_argument("derivative is not Hermitian");
  }
  if (std::abs(drho.trace()) > tol * static_cast<double>(drho.rows())) {
    throw_invalid_argument("derivative is not trace-free");
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> rho_eig(r);
  const Eigen::VectorXd& lambda = rho_eig.eigenvalues();
  const ComplexMatrix& v = rho_eig.eigenvectors();
  const ComplexMatrix d_eig = v.adjoint() * drho * v;

  const Eigen::Index dim = r.rows();
  ComplexMatrix sld_eig = ComplexMatrix::Zero(dim, dim);
  double fisher = 0.0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double s = lambda(j) + lambda(k);
      if (s <= kSldCutoff) continue;
      sld_eig(j, k) = 2.0 * d_eig(j, k) / s;
      fisher += 2.0 * std::norm(d_eig(j, k)) / s;
    }
  }
  ComplexMatrix sld = v * sld_eig * v.adjoint();
  sld = 0.5 * (sld + sld.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> sld_solver(sld);
  QfiResult result;
  result.qfi = fisher;
  result.sld_eigenbasis.eigenvalues = sld_solver.eigenvalues();
  result.sld_eigenbasis.eigenvectors = sld_solver.eigenvectors();
  fix_phases(result.sld_eigenbasis.eigenvectors);
  try {
    result.classical_fi_check = classical_fi(
        rho, drho, ProjectiveMeasurement::from_basis(result.sld_eigenbasis.eigenvectors));
  } catch (const Error& e) {
    // A derivative reaching outside the support of rho makes the classical
    // information of the SLD basis diverge.
    if (e.code() != ErrorCode::kSingularOutcome) throw;
    result.classical_fi_check = std::numeric_limits<double>::infinity();
  }
  return result;
}

double qfi_uncertainty(double qfi_per_shot, double total_time, double shot_time) {
  if (!(total_time > 0.0) || !(shot_time > 0.0) || !std::isfinite(total_time)) {
    throw_invalid_argument("total and shot time must be positive");
  }
  if (shot_time > total_time) throw_invalid_argument("shot time exceeds the total time");
  if (!std::isfinite(qfi_per_shot) || qfi_per_shot < 0.0) {
    throw_invalid_argument("Fisher information must be finite and >= 0");
  }
  if (qfi_per_shot == 0.0) {
    throw Error(ErrorCode::kNoInformation, "state carries no information about the detuning");
  }
  return 1.0 / std::sqrt(total_time / shot_time * qfi_per_shot);
}

double classical_fi(const DensityMatrix& rho, const ComplexMatrix& drho,
                    const ProjectiveMeasurement& measurement) {
  const ComplexMatrix& r = rho.elements();
  if (static_cast<Eigen::Index>(measurement.dim()) != r.rows() || drho.rows() != r.rows() ||
      drho.cols() != r.cols()) {
    throw_invalid_argument("measurement, state and derivative dimensions differ");
  }
  const ComplexMatrix& u = measurement.basis();
  const ComplexMatrix rho_u = r * u;
  const ComplexMatrix drho_u = drho * u;

  double fisher = 0.0;
  for (std::size_t m = 0; m < measurement.outcome_count(); ++m) {
    double p = 0.0;
    double dp = 0.0;
    for (Eigen::Index c : measurement.columns(m)) {
      p += u.col(c).dot(rho_u.col(c)).real();
      dp += u.col(c).dot(drho_u.col(c)).real();
    }
    if (p < kZeroProbability) {
      if (std::abs(dp) < kZeroProbabilityDerivative) continue;
      throw Error(ErrorCode::kSingularOutcome,
                  "outcome " + std::to_string(m) + " has zero probability but nonzero derivative");
    }
    fisher += dp * dp / p;
  }
  return fisher;
}

SymmetricPhaseQfi::SymmetricPhaseQfi(const StateVector& psi) : n_(psi.num_qubits()) {
  if (!psi.is_real()) throw_invalid_argument("symmetric phase QFI needs a real preparation");
  const std::uint64_t dim = psi.dim();
  const std::uint64_t all_ones = dim - 1;
  for (std::uint64_t x = 0; x < dim; ++x) {
    if (std::abs(psi[x].real() - psi[x ^ all_ones].real()) > 1e-12) {
      throw_invalid_argument("symmetric phase QFI needs a bit-flip symmetric preparation");
    }
  }

  half_ = static_cast<Eigen::Index>(dim / 2);
  amps_.resize(half_);
  generator_.resize(half_);
  for (Eigen::Index x = 0; x < half_; ++x) {
    const auto ux = static_cast<std::uint64_t>(x);
    amps_(x) = psi[ux].real();
    generator_(x) = hamming_weight(ux) - 0.5 * n_;
  }
  distance_.resize(static_cast<std::size_t>(half_ * half_));
  for (Eigen::Index y = 0; y < half_; ++y) {
    for (Eigen::Index x = 0; x < half_; ++x) {
      distance_[static_cast<std::size_t>(y * half_ + x)] = static_cast<std::uint8_t>(
          hamming_distance(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y)));
    }
  }
}

double SymmetricPhaseQfi::operator()(double gamma, double t) const {
  if (!std::isfinite(gamma) || gamma < 0.0 || !std::isfinite(t) || t < 0.0) {
    throw_invalid_argument("symmetric phase QFI needs gamma >= 0 and t >= 0");
  }
  std::vector<double> decay(static_cast<std::size_t>(n_) + 1);
  for (int d = 0; d <= n_; ++d) decay[static_cast<std::size_t>(d)] = std::exp(-gamma * t * d);

  // <x+-|rho|y+-> = rho_xy +- rho_x,ybar with rho_xy = psi_x psi_y e^{-gamma t d(x,y)}
  // and d(x, ybar) = n - d(x, y).
  Eigen::MatrixXd plus(half_, half_);
  Eigen::MatrixXd minus(half_, half_);
  for (Eigen::Index y = 0; y < half_; ++y) {
    for (Eigen::Index x = 0; x < half_; ++x) {
      const std::size_t d = distance_[static_cast<std::size_t>(y * half_ + x)];
      const double amp = amps_(x) * amps_(y);
      const double same = decay[d];
      const double flipped = decay[static_cast<std::size_t>(n_) - d];
      plus(x, y) = amp * (same + flipped);
      minus(x, y) = amp * (same - flipped);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> plus_eig(plus);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> minus_eig(minus);
  const Eigen::VectorXd& lp = plus_eig.eigenvalues();
  const Eigen::VectorXd& lm = minus_eig.eigenvalues();
  // The generator h - n/2 maps |x+> to (h(x) - n/2)|x->.
  const Eigen::MatrixXd coupling =
      plus_eig.eigenvectors().transpose() * generator_.asDiagonal() * minus_eig.eigenvectors();

  double sum = 0.0;
  for (Eigen::Index b = 0; b < half_; ++b) {
    for (Eigen::Index a = 0; a < half_; ++a) {
      const double s = lp(a) + lm(b);
      if (s <= kSldCutoff) continue;
      const double diff = lp(a) - lm(b);
      sum += diff * diff / s * coupling(a, b) * coupling(a, b);
    }
  }
  return 4.0 * t * t * sum;
}

}  // namespace clocksim
