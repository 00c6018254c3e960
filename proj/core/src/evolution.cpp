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

#include "clocksim/evolution.hpp"

#include <cmath>
#include <vector>

#include "clocksim/error.hpp"

namespace clocksim {
namespace {

// exp(-gamma t d) for d = 0..n, and exp(i delta t k) for k = -n..n.
struct EvolutionFactors {
  std::vector<double> decay;
  std::vector<Complex> phase;
  int n;

  EvolutionFactors(int n_qubits, const DephasingParams& p) : n(n_qubits) {
    decay.resize(static_cast<std::size_t>(n) + 1);
    for (int d = 0; d <= n; ++d) decay[static_cast<std::size_t>(d)] = std::exp(-p.gamma * p.t * d);
    phase.resize(2 * static_cast<std::size_t>(n) + 1);
    const double phi = p.delta * p.t;
    for (int k = -n; k <= n; ++k) {
      phase[static_cast<std::size_t>(k + n)] = {std::cos(phi * k), std::sin(phi * k)};
    }
  }

  Complex operator()(std::uint64_t x, std::uint64_t y) const {
    const int dh = hamming_distance(x, y);
    const int k = hamming_weight(y) - hamming_weight(x);
    return decay[static_cast<std::size_t>(dh)] * phase[static_cast<std::size_t>(k + n)];
  }
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Embeds a one-ion operator acting on ion `qubit` (bit `qubit` of the index).
// The Kronecker order puts the most significant bit first.
ComplexMatrix embed(const ComplexMatrix& op, int qubit, int n) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int k = n - 1; k >= 0; --k) {
    out = kron(out, k == qubit ? op : ComplexMatrix::Identity(2, 2));
  }
  return out;
}

}  // namespace

void DephasingParams::validate() const {
  if (!std::isfinite(delta) || !std::isfinite(gamma) || !std::isfinite(t)) {
    throw_invalid_argument("dephasing parameters must be finite");
  }
  if (gamma < 0.0) throw_invalid_argument("dephasing rate gamma must be >= 0");
  if (t < 0.0) throw_invalid_argument("evolution time t must be >= 0");
}

DensityMatrix dephase_evolve(const DensityMatrix& rho0, const DephasingParams& p) {
  p.validate();
  const int n = rho0.num_qubits();
  const EvolutionFactors factor(n, p);
  const ComplexMatrix& in = rho0.elements();
  ComplexMatrix out(in.rows(), in.cols());
  for (Eigen::Index y = 0; y < in.cols(); ++y) {
    for (Eigen::Index x = 0; x < in.rows(); ++x) {
      out(x, y) = in(x, y) * factor(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y));
    }
  }
  return DensityMatrix::trusted(n, std::move(out));
}

ComplexMatrix drho_ddelta(const DensityMatrix& rho0, const DephasingParams& p) {
  p.validate();
  const int n = rho0.num_qubits();
  const EvolutionFactors factor(n, p);
  const ComplexMatrix& in = rho0.elements();
  ComplexMatrix out(in.rows(), in.cols());
  for (Eigen::Index y = 0; y < in.cols(); ++y) {
    for (Eigen::Index x = 0; x < in.rows(); ++x) {
      const auto ux = static_cast<std::uint64_t>(x);
      const auto uy = static_cast<std::uint64_t>(y);
      const double k = hamming_weight(uy) - hamming_weight(ux);
      out(x, y) = Complex{0.0, p.t * k} * in(x, y) * factor(ux, uy);
    }
  }
  return out;
}

DensityMatrix master_equation_oracle(const DensityMatrix& rho0, const DephasingParams& p,
                                     int steps) {
  p.validate();
  if (steps < 1) throw_invalid_argument("integrator needs at least one step");
  const int n = rho0.num_qubits();

  ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
  excited(1, 1) = 1.0;
  ComplexMatrix pauli_z = ComplexMatrix::Zero(2, 2);
  pauli_z(0, 0) = 1.0;
  pauli_z(1, 1) = -1.0;

  const Eigen::Index dim = rho0.elements().rows();
  ComplexMatrix hamiltonian = ComplexMatrix::Zero(dim, dim);
  std::vector<ComplexMatrix> z_ops;
  z_ops.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    hamiltonian += p.delta * embed(excited, k, n);
    z_ops.push_back(embed(pauli_z, k, n));
  }

  const Complex minus_i{0.0, -1.0};
  const double rate = 0.5 * p.gamma;
  auto rhs = [&](const ComplexMatrix& rho) {
    ComplexMatrix out = minus_i * (hamiltonian * rho - rho * hamiltonian);
    for (const auto& z : z_ops) out += rate * (z * rho * z - rho);
    return out;
  };

  const double h = p.t / steps;
  ComplexMatrix rho = rho0.elements();
  for (int s = 0; s < steps; ++s) {
    const ComplexMatrix k1 = rhs(rho);
    const ComplexMatrix k2 = rhs(rho + 0.5 * h * k1);
    const ComplexMatrix k3 = rhs(rho + 0.5 * h * k2);
    const ComplexMatrix k4 = rhs(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return DensityMatrix::trusted(n, std::move(rho));
}

}  // namespace clocksim
