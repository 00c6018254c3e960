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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "clocksim/collective.hpp"
#include "clocksim/error.hpp"
#include "support/oracles.hpp"

namespace clocksim {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(CollectiveEvolution, MomentsMatchDenseEvolution) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      const StateVector psi(n, oracle::random_state(n, rng));
      const CollectiveMoments m0 = collective_moments(psi);
      const double delta = -2.0 + 4.0 * unit(rng);
      const double gamma = unit(rng);
      const double t = 2.0 * unit(rng);
      const ComplexMatrix rho = oracle::kraus_evolve(
          psi.amplitudes() * psi.amplitudes().adjoint(), n, delta, gamma, t);
      const ComplexMatrix sx = oracle::collective_x(n);
      EXPECT_NEAR(evolved_sx_mean(m0, delta, gamma, t), oracle::expectation(sx, rho), 1e-12);
      EXPECT_NEAR(evolved_sx2_mean(m0, delta, gamma, t), oracle::expectation(sx * sx, rho),
                  1e-11);
    }
  }
}

TEST(CollectiveEvolution, SlopeIsTheDetuningDerivative) {
  std::mt19937_64 rng(42);
  for (int n = 1; n <= 5; ++n) {
    const CollectiveMoments m0 = collective_moments(StateVector(n, oracle::random_state(n, rng)));
    auto mean = [&](double d) { return evolved_sx_mean(m0, d, 0.3, 1.7); };
    EXPECT_NEAR(evolved_sx_slope(m0, 0.4, 0.3, 1.7), oracle::central_difference(mean, 0.4, 1e-3),
                1e-10);
  }
}

TEST(GenRamsey, UncertaintyMatchesDenseFiniteDifferences) {
  std::mt19937_64 rng(43);
  for (int n = 2; n <= 4; ++n) {
    const auto a = oracle::random_symmetric_coeffs(n, rng);
    const StateVector psi = symmetric_state(n, a);
    const CollectiveMoments m0 = collective_moments(psi);
    for (double t : {0.2, 0.6}) {
      const double delta = 0.8 / t;
      const double expected =
          oracle::dense_genramsey_uncertainty(psi.amplitudes(), n, delta, 0.7, t, 30.0);
      EXPECT_NEAR(genramsey_uncertainty(m0, {n, 30.0, t}, delta, 0.7) / expected, 1.0, 1e-8);
    }
  }
}

TEST(GenRamsey, ReducesToUncorrelatedScheme) {
  for (int n = 1; n <= 6; ++n) {
    const CollectiveMoments m0 = collective_moments(product_superposition(n));
    const ExperimentBudget budget{n, 40.0, 0.35};
    const double delta = 1.2;
    EXPECT_NEAR(genramsey_uncertainty(m0, budget, delta, 0.9) /
                    uncertainty_uncorrelated(budget, delta, 0.9),
                1.0, 1e-12);
  }
}

TEST(GenRamsey, ZeroSlopeIsSingular) {
  const CollectiveMoments m0 = collective_moments(product_superposition(2));
  try {
    genramsey_uncertainty(m0, {2, 10.0, 1.0}, kPi, 0.1);
    FAIL() << "expected singular-point";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularPoint);
  }
  EXPECT_THROW(genramsey_uncertainty(m0, {3, 10.0, 1.0}, 1.0, 0.1), Error);
}

TEST(OptimalDuration, ResidualVanishesAtTheRoot) {
  std::mt19937_64 rng(44);
  for (int n = 2; n <= 9; ++n) {
    const CollectiveMoments m0 =
        collective_moments(symmetric_state(n, oracle::random_symmetric_coeffs(n, rng)));
    if (m0.sy_variance() <= 1e-9) continue;
    for (double gamma : {0.5, 2.0}) {
      const double t = solve_topt(m0, gamma);
      EXPECT_GT(t, 0.0);
      EXPECT_LT(std::abs(topt_residual(m0, gamma, t)), 1e-12 * n * std::exp(2.0 * gamma * t));
      EXPECT_LT(topt_residual(m0, gamma, t * (1 - 1e-9)), topt_residual(m0, gamma, t * (1 + 1e-9)));
    }
  }
}

TEST(OptimalDuration, ProductStateRootIsHalfTheDecoherenceTime) {
  for (int n = 1; n <= 10; ++n) {
    const CollectiveMoments m0 = collective_moments(product_superposition(n));
    EXPECT_NEAR(solve_topt(m0, 1.0), 0.5, 1e-14);
    EXPECT_NEAR(solve_topt(m0, 4.0), 0.125, 1e-14);
  }
}

TEST(OptimalDuration, ClosedFormIsTheMinimumOverTime) {
  // Minimize the generalized-Ramsey uncertainty at phase pi/2 by brute force.
  std::mt19937_64 rng(45);
  for (int n = 2; n <= 6; ++n) {
    const auto a = oracle::random_symmetric_coeffs(n, rng);
    const CollectiveMoments m0 = collective_moments(symmetric_state(n, a));
    if (std::abs(m0.sx_mean) < 0.1) continue;
    const double gamma = 1.0;
    const double total = 100.0;
    const PrecisionResult r = genramsey_opt_uncertainty(m0, total, gamma);
    double best = std::numeric_limits<double>::infinity();
    double best_t = 0.0;
    for (int i = 1; i <= 20000; ++i) {
      const double t = 2e-4 * i;
      const double v = genramsey_uncertainty(m0, {n, total, t}, kPi / (2.0 * t), gamma);
      if (v < best) {
        best = v;
        best_t = t;
      }
    }
    EXPECT_NEAR(r.delta_omega / best, 1.0, 1e-7) << n;
    EXPECT_NEAR(r.t_opt, best_t, 3e-4) << n;
    EXPECT_LE(r.delta_omega, best * (1 + 1e-12));
    EXPECT_DOUBLE_EQ(r.phase_opt, kPi / 2);
  }
}

TEST(OptimalDuration, DegenerateStatesAreRejected) {
  const CollectiveMoments g = collective_moments(ghz(3));
  try {
    genramsey_opt_uncertainty(g, 100.0, 1.0);
    FAIL() << "expected degenerate-state";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateState);
  }
  CollectiveMoments flat = collective_moments(product_superposition(2));
  flat.sy2_mean = 0.0;
  EXPECT_THROW(solve_topt(flat, 1.0), Error);
  EXPECT_THROW(solve_topt(collective_moments(product_superposition(2)), 0.0), Error);
  EXPECT_THROW(genramsey_opt_uncertainty(collective_moments(product_superposition(2)), 0.1, 1.0),
               Error);
}

TEST(BoundChain, OrderedAndTightForProductStates) {
  std::mt19937_64 rng(46);
  for (int n = 2; n <= 8; ++n) {
    const CollectiveMoments m0 =
        collective_moments(symmetric_state(n, oracle::random_symmetric_coeffs(n, rng)));
    if (std::abs(m0.sx_mean) < 1e-3) continue;
    const PrecisionBounds b = precision_bound_chain(m0, 100.0, 1.0);
    EXPECT_LE(b.state, genramsey_opt_uncertainty(m0, 100.0, 1.0).delta_omega);
    EXPECT_LE(b.universal, b.state * (1 + 1e-12));
    EXPECT_NEAR(b.universal * std::sqrt(std::numbers::e), reference_limit(n, 100.0, 1.0), 1e-15);
  }
  const CollectiveMoments p = collective_moments(product_superposition(4));
  const PrecisionBounds b = precision_bound_chain(p, 100.0, 1.0);
  EXPECT_NEAR(b.state / b.universal, 1.0, 1e-12);
}

}  // namespace
}  // namespace clocksim
