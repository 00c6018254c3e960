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

#include "clocksim/qstate.hpp"

namespace clocksim {

/// Free evolution with detuning delta = omega - omega_0 and independent
/// dephasing at rate gamma = 1/tau_dec, for a duration t.
///
/// Rate convention: a single-ion coherence decays as exp(-gamma t), the
/// convention in which the Ramsey signal reads (1 + cos(delta t) e^{-gamma t})/2.
struct DephasingParams {
  double delta = 0.0;
  double gamma = 0.0;
  double t = 0.0;

  /// Throws invalid-argument unless gamma >= 0, t >= 0 and all are finite.
  void validate() const;
};

/// Exact evolution, applied elementwise:
///   <x|rho(t)|y> = <x|rho(0)|y> exp(i delta t (h(y) - h(x))) exp(-gamma t d_H(x, y))
/// with h the Hamming weight and d_H the Hamming distance.
DensityMatrix dephase_evolve(const DensityMatrix& rho0, const DephasingParams& p);

/// Fixed-step RK4 integration of the n-ion master equation
///   d rho/dt = -i [H, rho] + (gamma/2) sum_k (Z_k rho Z_k - rho),
///   H = delta sum_k |1><1|_k,
/// built from dense operators. Reference solution for dephase_evolve.
DensityMatrix master_equation_oracle(const DensityMatrix& rho0, const DephasingParams& p, int steps);

/// Analytic d rho(t) / d delta: each evolved element times i t (h(y) - h(x)).
ComplexMatrix drho_ddelta(const DensityMatrix& rho0, const DephasingParams& p);

}  // namespace clocksim
