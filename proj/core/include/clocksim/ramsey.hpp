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

#include <optional>
#include <string_view>

namespace clocksim {

enum class Scheme {
  kUncorrelated,
  kGhz,
  kSymmetricGenRamsey,
  kSymmetricQfi,
};

std::string_view scheme_name(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);

/// Resources of one experiment: n ions, total time T, single-shot duration t.
/// The number of repetitions T/t is treated as a real number.
struct ExperimentBudget {
  int n = 1;
  double total_time = 1.0;
  double shot_time = 1.0;

  /// Throws invalid-argument unless n >= 1 and total_time >= shot_time > 0.
  void validate() const;
  double repetitions() const { return total_time / shot_time; }
};

struct PrecisionResult {
  Scheme scheme = Scheme::kUncorrelated;
  double t_opt = 0.0;
  double phase_opt = 0.0;  // delta * t at the optimum, radians
  double delta_omega = 0.0;
  double improvement_pct = 0.0;
};

/// Throws invalid-argument when T < tau_dec / 2 = 1/(2 gamma): below that
/// the optimal single-shot duration no longer fits inside the budget.
void require_total_time_admissible(double total_time, double gamma);

/// P = (1 + cos(delta t) e^{-gamma t}) / 2.
double signal_uncorrelated(double delta, double t, double gamma);

/// P = (1 + cos(n delta t) e^{-n gamma t}) / 2.
double signal_ghz(int n, double delta, double t, double gamma);

/// Binomial variance P(1-P)/N of the estimated probability.
double shot_variance(double p, double samples);

/// Frequency uncertainty of Ramsey spectroscopy on n independent ions with
/// N = nT/t data points. Throws singular-point when sin(delta t) == 0.
double uncertainty_uncorrelated(const ExperimentBudget& budget, double delta, double gamma);

/// Frequency uncertainty of the GHZ scheme with N = T/t measurements of the
/// first ion. Throws singular-point when sin(n delta t) == 0.
double uncertainty_ghz(const ExperimentBudget& budget, double delta, double gamma);

/// sqrt(2 gamma e / (n T)): the optimum shared by uncorrelated and GHZ
/// preparations. Baseline for every improvement percentage.
double reference_limit(int n, double total_time, double gamma);

/// 100 (1 - delta_omega / reference).
double improvement_pct(double delta_omega, double reference);

/// Dense density-matrix simulation of the full Ramsey sequence: prepare,
/// dephase for t, undo the preparation, read the |1> population of ion 1.
/// Supports kUncorrelated and kGhz with n <= 10.
double pipeline_signal(Scheme scheme, int n, double delta, double gamma, double t);

}  // namespace clocksim
