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
#include "clocksim/ramsey.hpp"

namespace clocksim {

// Generalized Ramsey spectroscopy: measure S_x after free evolution with
// dephasing. Moments passed in are those of the prepared state (t = 0).

/// <S_x(t)> = e^{-gamma t} (cos(delta t) <S_x> + sin(delta t) <S_y>).
double evolved_sx_mean(const CollectiveMoments& m0, double delta, double gamma, double t);

/// <S_x^2(t)> = n + e^{-2 gamma t} (<S_x^2>_rot - n), where the rotated
/// moment is the decoherence-free expectation of (cos S_x + sin S_y)^2.
double evolved_sx2_mean(const CollectiveMoments& m0, double delta, double gamma, double t);

/// d<S_x(t)>/d omega, equal to the derivative with respect to delta.
double evolved_sx_slope(const CollectiveMoments& m0, double delta, double gamma, double t);

/// sqrt(Var S_x / (N slope^2)) with N = T/t. Throws singular-point when the
/// slope vanishes.
double genramsey_uncertainty(const CollectiveMoments& m0, const ExperimentBudget& budget,
                             double delta, double gamma);

/// Left side minus right side of the optimal-duration condition at
/// delta t = pi/2:  n [1 + (2 gamma t - 1) e^{2 gamma t}] - <dS_y^2>.
double topt_residual(const CollectiveMoments& m0, double gamma, double t);

/// Unique positive root of topt_residual, by bracketing and bisection to
/// full double precision. Throws degenerate-state when <dS_y^2> <= 0.
double solve_topt(const CollectiveMoments& m0, double gamma);

/// Optimized generalized-Ramsey sensitivity
///   sqrt(2 n gamma e^{2 gamma t_opt} / (T <S_x>^2))
/// at delta t = pi/2, with improvement relative to reference_limit.
PrecisionResult genramsey_opt_uncertainty(const CollectiveMoments& m0, double total_time,
                                          double gamma);

struct PrecisionBounds {
  double state;      // sqrt(2 n gamma / (T <S_x>^2))
  double universal;  // sqrt(2 gamma / (n T)) = reference_limit / sqrt(e)
};

/// Lower bounds on genramsey_opt_uncertainty. Throws degenerate-state when
/// <S_x> == 0.
PrecisionBounds precision_bound_chain(const CollectiveMoments& m0, double total_time,
                                      double gamma);

}  // namespace clocksim
