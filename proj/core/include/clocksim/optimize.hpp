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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clocksim/qstate.hpp"
#include "clocksim/ramsey.hpp"

namespace clocksim {

struct OptimizerConfig {
  int restarts = 16;
  std::uint64_t seed = 0;
  double tol_obj = 1e-10;  // relative spread of simplex values
  double tol_x = 1e-9;     // relative width for golden-section, simplex size otherwise
  int max_iter = 4000;

  /// Throws invalid-argument unless restarts >= 1, tolerances > 0, max_iter >= 1.
  void validate() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Minimizes a scalar objective on [lo, hi]: a coarse scan (geometric when
/// hi/lo > 10) locates the best sample, then golden-section search refines
/// the neighbouring cell until its relative width drops below cfg.tol_x.
///
/// Non-finite values and clocksim::Error thrown by the objective count as
/// +inf, so the bracket may touch singular points. Throws bracketing when no
/// sample is finite.
ScalarMinimum minimize_over_t(const std::function<double(double)>& objective, Interval bracket,
                              const OptimizerConfig& cfg);

/// Numerical optimum of the closed-form uncertainty of an uncorrelated or
/// GHZ preparation over shot duration t and detuning phase: for every t the
/// phase is minimized on (0, pi) (uncorrelated) or (0, pi/n) (GHZ).
PrecisionResult optimize_closed_form(Scheme scheme, int n, double total_time, double gamma,
                                     const OptimizerConfig& cfg);

/// Minimizes qfi_uncertainty(qfi_of_t(t), T, t) over t in (0, T]. The result
/// carries improvement relative to reference_limit(n, T, gamma); phase_opt
/// is zero because the phase QFI does not depend on the detuning.
PrecisionResult optimize_qfi_over_t(const std::function<double(double)>& qfi_of_t, int n,
                                    double total_time, double gamma, const OptimizerConfig& cfg);

/// QFI as a function of shot duration for any preparation, through the
/// dense dephase_evolve / drho_ddelta / qfi route.
std::function<double(double)> dense_qfi_of_t(const StateVector& psi, double gamma,
                                             double delta = 0.0);

enum class CoeffMethod { kGenRamsey, kQfi };

std::string_view method_name(CoeffMethod method);
std::optional<CoeffMethod> parse_method(std::string_view name);

/// Normalizes a and flips its sign so the first nonzero entry is positive.
std::vector<double> canonical_coeffs(std::span<const double> a);

/// Best delta_omega / reference_limit over shot durations for fixed
/// symmetric-family coefficients, evaluated from scratch. Returns +inf for
/// degenerate preparations (zero <S_x> or zero <dS_y^2> under kGenRamsey).
struct CoeffEvaluation {
  double ratio = 0.0;
  double t_opt = 0.0;
};
CoeffEvaluation evaluate_symmetric_coeffs(int n, std::span<const double> a, double gamma,
                                          double total_time, CoeffMethod method,
                                          const OptimizerConfig& cfg);

struct RestartOutcome {
  int restart = 0;
  bool ok = false;
  double improvement_pct = 0.0;
  double t_opt = 0.0;
  std::vector<double> coeffs;
  int evaluations = 0;
};

struct CoefficientOptimum {
  int n = 0;
  CoeffMethod method = CoeffMethod::kGenRamsey;
  double improvement_pct = 0.0;
  double delta_omega = 0.0;
  double reference = 0.0;
  double t_opt = 0.0;
  std::vector<double> coeffs;  // unit norm, first nonzero entry positive
  std::vector<RestartOutcome> restarts;
  double restart_spread_pct = 0.0;  // max - min improvement over successful restarts
};

/// Maximizes the improvement over reference_limit across unit-norm
/// symmetric-family coefficients (dimension floor(n/2)+1) with a
/// multi-restart Nelder-Mead search in R^{floor(n/2)+1}, normalizing before
/// each evaluation. For every candidate the shot duration is optimized
/// (closed form for kGenRamsey, golden-section for kQfi).
///
/// Restart 0 starts from the uncorrelated preparation; under kQfi the
/// generalized-Ramsey optimum (or `warm_start` if given) is an additional
/// start. Remaining restarts draw seeded random starts. Restarts run in
/// parallel and merge by index, so results are bitwise reproducible.
///
/// Requires 2 <= n <= 10, gamma > 0, T >= 1/(2 gamma). Throws
/// optimization-failure when every restart ends on a degenerate preparation.
CoefficientOptimum optimize_symmetric_coeffs(int n, double gamma, double total_time,
                                             CoeffMethod method, const OptimizerConfig& cfg,
                                             std::span<const double> warm_start = {});

struct ImprovementCurvePoint {
  int n = 0;
  double improvement_genramsey_pct = 0.0;
  double improvement_qfi_pct = 0.0;
  std::vector<double> best_coeffs;  // optimum of the QFI method
  std::optional<CoefficientOptimum> genramsey;
  std::optional<CoefficientOptimum> qfi;
  std::string failure;  // empty when both methods succeeded

  bool ok() const { return failure.empty(); }
};

/// Both improvement curves for n in [n_min, n_max]. A failing point is
/// recorded with a failure message and the sweep continues.
std::vector<ImprovementCurvePoint> improvement_curve(int n_min, int n_max, double gamma,
                                              double total_time, const OptimizerConfig& cfg);

struct UncertaintyScanRow {
  double t = 0.0;
  double delta_omega_uncorrelated = 0.0;  // NaN at singular points
  double delta_omega_ghz = 0.0;
};

/// Uncertainty against shot duration for uncorrelated and GHZ preparations.
/// Without `fixed_detuning` the phase is locked at the optimum: delta t = pi/2
/// for uncorrelated ions and pi/(2n) for GHZ. With a fixed detuning, rows at
/// singular points hold NaN.
std::vector<UncertaintyScanRow> uncertainty_scan(int n, double gamma, double total_time,
                               std::span<const double> t_grid,
                               std::optional<double> fixed_detuning = std::nullopt);

}  // namespace clocksim
