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

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "clocksim/evolution.hpp"
#include "clocksim/fisher.hpp"
#include "clocksim/optimize.hpp"
#include "clocksim/qstate.hpp"

namespace {

using namespace clocksim;

std::vector<double> ramp_coeffs(int n) {
  std::vector<double> a(symmetric_coeff_count(n));
  double norm = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = 1.0 + static_cast<double>(k);
    norm += a[k] * a[k];
  }
  for (double& v : a) v /= std::sqrt(norm);
  return a;
}

void BM_DephaseEvolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DensityMatrix rho0 = to_density(ghz(n));
  const DephasingParams p{0.3, 1.0, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(dephase_evolve(rho0, p));
}
BENCHMARK(BM_DephaseEvolve)->DenseRange(2, 10, 2);

void BM_MasterEquationOracle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DensityMatrix rho0 = to_density(product_superposition(n));
  const DephasingParams p{0.3, 1.0, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(master_equation_oracle(rho0, p, 200));
}
BENCHMARK(BM_MasterEquationOracle)->DenseRange(1, 4);

void BM_DenseQfi(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DensityMatrix rho0 = to_density(product_superposition(n));
  const DephasingParams p{0.0, 1.0, 0.3};
  const DensityMatrix rho = dephase_evolve(rho0, p);
  const ComplexMatrix drho = drho_ddelta(rho0, p);
  for (auto _ : state) benchmark::DoNotOptimize(qfi(rho, drho));
}
BENCHMARK(BM_DenseQfi)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

void BM_SymmetricPhaseQfi(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SymmetricPhaseQfi f(symmetric_state(n, ramp_coeffs(n)));
  for (auto _ : state) benchmark::DoNotOptimize(f(1.0, 0.3));
}
BENCHMARK(BM_SymmetricPhaseQfi)->DenseRange(2, 10, 2)->Unit(benchmark::kMicrosecond);

void BM_OptimizeGenRamsey(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  OptimizerConfig cfg;
  cfg.restarts = 4;
  cfg.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        optimize_symmetric_coeffs(n, 1.0, 100.0, CoeffMethod::kGenRamsey, cfg));
  }
}
BENCHMARK(BM_OptimizeGenRamsey)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
