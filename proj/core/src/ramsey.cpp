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

#include "clocksim/ramsey.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "clocksim/error.hpp"
#include "clocksim/evolution.hpp"
#include "clocksim/qstate.hpp"

namespace clocksim {
namespace {

constexpr int kMaxPipelineQubits = 10;
// |sin| below this counts as a zero of the signal slope.
constexpr double kSingularSine = 1e-12;

void check_rate(double gamma) {
  if (!std::isfinite(gamma) || gamma < 0.0) throw_invalid_argument("gamma must be >= 0");
}

void check_time(double t) {
  if (!std::isfinite(t) || t < 0.0) throw_invalid_argument("t must be >= 0");
}

// delta_omega^2 = (1 - c^2 E^2) / (K s^2 E^2) for a signal (1 + c E)/2 whose
// phase derivative is scaled into K.
double propagated_uncertainty(double phase, double coherence, double denom_scale) {
  const double s = std::sin(phase);
  if (std::abs(s) <= kSingularSine) {
    throw Error(ErrorCode::kSingularPoint,
                "signal slope vanishes at phase " + std::to_string(phase));
  }
  const double c = std::cos(phase);
  const double e2 = coherence * coherence;
  return std::sqrt((1.0 - c * c * e2) / (denom_scale * s * s * e2));
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kUncorrelated:
      return "uncorrelated";
    case Scheme::kGhz:
      return "ghz";
    case Scheme::kSymmetricGenRamsey:
      return "symmetric-genramsey";
    case Scheme::kSymmetricQfi:
      return "symmetric-qfi";
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::kUncorrelated, Scheme::kGhz, Scheme::kSymmetricGenRamsey,
                   Scheme::kSymmetricQfi}) {
    if (scheme_name(s) == name) return s;
  }
  return std::nullopt;
}

void ExperimentBudget::validate() const {
  if (n < 1) throw_invalid_argument("ion count must be >= 1");
  if (!std::isfinite(total_time) || !std::isfinite(shot_time) || shot_time <= 0.0) {
    throw_invalid_argument("shot time must be positive");
  }
  if (total_time < shot_time) throw_invalid_argument("total time must be >= shot time");
}

void require_total_time_admissible(double total_time, double gamma) {
  check_rate(gamma);
  if (!std::isfinite(total_time) || total_time <= 0.0) {
    throw_invalid_argument("total time must be positive");
  }
  if (gamma > 0.0 && total_time < 0.5 / gamma) {
    throw_invalid_argument("total time T must be >= tau_dec/2 = 1/(2 gamma)");
  }
}

double signal_uncorrelated(double delta, double t, double gamma) {
  check_rate(gamma);
  check_time(t);
  return 0.5 * (1.0 + std::cos(delta * t) * std::exp(-gamma * t));
}

double signal_ghz(int n, double delta, double t, double gamma) {
  if (n < 1) throw_invalid_argument("ion count must be >= 1");
  check_rate(gamma);
  check_time(t);
  return 0.5 * (1.0 + std::cos(n * delta * t) * std::exp(-n * gamma * t));
}

double shot_variance(double p, double samples) {
  if (!(p >= 0.0 && p <= 1.0)) throw_invalid_argument("probability must lie in [0, 1]");
  if (!(samples > 0.0)) throw_invalid_argument("sample count must be positive");
  return p * (1.0 - p) / samples;
}

double uncertainty_uncorrelated(const ExperimentBudget& budget, double delta, double gamma) {
  budget.validate();
  check_rate(gamma);
  const double t = budget.shot_time;
  return propagated_uncertainty(delta * t, std::exp(-gamma * t),
                                budget.n * budget.total_time * t);
}

double uncertainty_ghz(const ExperimentBudget& budget, double delta, double gamma) {
  budget.validate();
  check_rate(gamma);
  const double t = budget.shot_time;
  const double n = budget.n;
  return propagated_uncertainty(n * delta * t, std::exp(-n * gamma * t),
                                n * n * budget.total_time * t);
}

double reference_limit(int n, double total_time, double gamma) {
  if (n < 1) throw_invalid_argument("ion count must be >= 1");
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw_invalid_argument("total time must be positive");
  }
  check_rate(gamma);
  return std::sqrt(2.0 * gamma * std::numbers::e / (n * total_time));
}

double improvement_pct(double delta_omega, double reference) {
  if (!(reference > 0.0) || !std::isfinite(reference)) {
    throw_invalid_argument("reference uncertainty must be positive and finite");
  }
  return 100.0 * (1.0 - delta_omega / reference);
}

double pipeline_signal(Scheme scheme, int n, double delta, double gamma, double t) {
  if (n < 1 || n > kMaxPipelineQubits) {
    throw_invalid_argument("pipeline simulation supports 1 <= n <= 10");
  }
  const DephasingParams params{delta, gamma, t};
  params.validate();
  const Eigen::Matrix2cd pulse = circuit::ramsey_pulse();

  const auto dim = Eigen::Index{1} << n;
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  rho(0, 0) = 1.0;

  switch (scheme) {
    case Scheme::kUncorrelated: {
      for (int k = 0; k < n; ++k) circuit::apply_single_qubit(rho, k, pulse);
      rho = dephase_evolve(DensityMatrix::trusted(n, std::move(rho)), params).elements();
      for (int k = 0; k < n; ++k) circuit::apply_single_qubit(rho, k, pulse);
      break;
    }
    case Scheme::kGhz: {
      circuit::apply_single_qubit(rho, 0, pulse);
      for (int k = 1; k < n; ++k) circuit::apply_cnot(rho, 0, k);
      rho = dephase_evolve(DensityMatrix::trusted(n, std::move(rho)), params).elements();
      for (int k = n - 1; k >= 1; --k) circuit::apply_cnot(rho, 0, k);
      circuit::apply_single_qubit(rho, 0, pulse);
      break;
    }
    default:
      throw_invalid_argument("pipeline_signal supports only uncorrelated and ghz schemes, got " +
                             std::string(scheme_name(scheme)));
  }
  return circuit::excited_population(rho, 0);
}

}  // namespace clocksim
