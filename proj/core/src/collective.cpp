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

#include "clocksim/collective.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "clocksim/error.hpp"

namespace clocksim {
namespace {

constexpr double kZeroSlope = 1e-13;
constexpr double kZeroMoment = 1e-12;

void check_moments(const CollectiveMoments& m) {
  if (m.n < 1) throw_invalid_argument("collective moments need n >= 1");
}

void check_params(double gamma, double t) {
  if (!std::isfinite(gamma) || gamma < 0.0) throw_invalid_argument("gamma must be >= 0");
  if (!std::isfinite(t) || t < 0.0) throw_invalid_argument("t must be >= 0");
}

void check_signal(const CollectiveMoments& m) {
  if (std::abs(m.sx_mean) <= kZeroMoment * m.n) {
    throw Error(ErrorCode::kDegenerateState, "prepared state has <S_x> = 0 (no signal)");
  }
}

}  // namespace

double evolved_sx_mean(const CollectiveMoments& m0, double delta, double gamma, double t) {
  check_moments(m0);
  check_params(gamma, t);
  const double phi = delta * t;
  return std::exp(-gamma * t) * (std::cos(phi) * m0.sx_mean + std::sin(phi) * m0.sy_mean);
}

double evolved_sx2_mean(const CollectiveMoments& m0, double delta, double gamma, double t) {
  check_moments(m0);
  check_params(gamma, t);
  const double phi = delta * t;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double rotated = c * c * m0.sx2_mean + s * s * m0.sy2_mean + 2.0 * c * s * m0.sxsy_mean;
  return m0.n + std::exp(-2.0 * gamma * t) * (rotated - m0.n);
}

double evolved_sx_slope(const CollectiveMoments& m0, double delta, double gamma, double t) {
  check_moments(m0);
  check_params(gamma, t);
  const double phi = delta * t;
  return t * std::exp(-gamma * t) * (-std::sin(phi) * m0.sx_mean + std::cos(phi) * m0.sy_mean);
}

double genramsey_uncertainty(const CollectiveMoments& m0, const ExperimentBudget& budget,
                             double delta, double gamma) {
  budget.validate();
  if (budget.n != m0.n) throw_invalid_argument("budget and moments disagree on n");
  const double t = budget.shot_time;
  const double slope = evolved_sx_slope(m0, delta, gamma, t);
  if (std::abs(slope) <= kZeroSlope * m0.n * t) {
    throw Error(ErrorCode::kSingularPoint, "d<S_x>/d omega vanishes");
  }
  const double mean = evolved_sx_mean(m0, delta, gamma, t);
  const double variance = std::max(0.0, evolved_sx2_mean(m0, delta, gamma, t) - mean * mean);
  return std::sqrt(variance / (budget.repetitions() * slope * slope));
}

double topt_residual(const CollectiveMoments& m0, double gamma, double t) {
  // n[1 + (2x - 1) e^{2x}] - V  written as  n (2x - 1) e^{2x} + (n - V)
  const double x = gamma * t;
  return m0.n * (2.0 * x - 1.0) * std::exp(2.0 * x) + (m0.n - m0.sy_variance());
}

double solve_topt(const CollectiveMoments& m0, double gamma) {
  check_moments(m0);
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw_invalid_argument("optimal duration needs gamma > 0");
  }
  if (m0.sy_variance() <= kZeroMoment * m0.n) {
    throw Error(ErrorCode::kDegenerateState, "prepared state has <dS_y^2> = 0");
  }

  double lo = 0.0;
  double hi = 10.0 / gamma;
  for (int i = 0; topt_residual(m0, gamma, hi) < 0.0; ++i) {
    if (i > 64) throw Error(ErrorCode::kBracketing, "optimal-duration root not bracketed");
    lo = hi;
    hi *= 2.0;
  }
  // residual(lo) < 0 <= residual(hi); the residual is strictly increasing.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (topt_residual(m0, gamma, mid) < 0.0 ? lo : hi) = mid;
  }
  return std::abs(topt_residual(m0, gamma, lo)) < std::abs(topt_residual(m0, gamma, hi)) ? lo
                                                                                          : hi;
}

PrecisionResult genramsey_opt_uncertainty(const CollectiveMoments& m0, double total_time,
                                          double gamma) {
  check_moments(m0);
  require_total_time_admissible(total_time, gamma);
  check_signal(m0);
  const double t_opt = solve_topt(m0, gamma);

  PrecisionResult result;
  result.scheme = Scheme::kSymmetricGenRamsey;
  result.t_opt = t_opt;
  result.phase_opt = std::numbers::pi / 2.0;
  result.delta_omega = std::sqrt(2.0 * m0.n * gamma * std::exp(2.0 * gamma * t_opt) /
                                 (total_time * m0.sx_mean * m0.sx_mean));
  result.improvement_pct =
      improvement_pct(result.delta_omega, reference_limit(m0.n, total_time, gamma));
  return result;
}

PrecisionBounds precision_bound_chain(const CollectiveMoments& m0, double total_time,
                                      double gamma) {
  check_moments(m0);
  if (!(total_time > 0.0)) throw_invalid_argument("total time must be positive");
  if (!std::isfinite(gamma) || gamma < 0.0) throw_invalid_argument("gamma must be >= 0");
  check_signal(m0);
  return {std::sqrt(2.0 * m0.n * gamma / (total_time * m0.sx_mean * m0.sx_mean)),
          std::sqrt(2.0 * gamma / (m0.n * total_time))};
}

}  // namespace clocksim
