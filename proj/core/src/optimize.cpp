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

#include "clocksim/optimize.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "clocksim/collective.hpp"
#include "clocksim/error.hpp"
#include "clocksim/evolution.hpp"
#include "clocksim/fisher.hpp"
#include "clocksim/parallel.hpp"

namespace clocksim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kScanPoints = 33;
constexpr int kMinFamilyQubits = 2;
constexpr int kMaxFamilyQubits = 10;
// Binary digits of the inner shot-duration search while the simplex is
// moving (relative t error ~1e-6, objective error ~1e-12). The reported
// optimum is re-evaluated from scratch with cfg.tol_x.
constexpr int kInnerTimeBits = 20;

using Objective = std::function<double(double)>;

double safe_eval(const Objective& f, double x) {
  try {
    const double v = f(x);
    return std::isfinite(v) ? v : kInf;
  } catch (const Error&) {
    return kInf;
  }
}

ScalarMinimum golden_section(const Objective& f, double a, double b, double tol_rel,
                             int max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  ScalarMinimum out;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = safe_eval(f, c);
  double fd = safe_eval(f, d);
  out.evaluations = 2;
  for (int it = 0; it < max_iter; ++it) {
    const double scale = std::max(std::abs(c), std::abs(d));
    if (b - a <= tol_rel * scale || b - a <= std::numeric_limits<double>::min()) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = safe_eval(f, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = safe_eval(f, d);
    }
    ++out.evaluations;
  }
  if (fc < fd) {
    out.x = c;
    out.value = fc;
  } else {
    out.x = d;
    out.value = fd;
  }
  return out;
}

// Expands a geometric bracket around `guess` until the middle point is the
// lowest, then refines it with Brent's method (golden section plus parabolic
// steps) to `bits` binary digits.
ScalarMinimum refine_near(const Objective& f, double guess, Interval limits, int bits,
                          int max_iter) {
  constexpr double kRatio = 1.5;
  guess = std::clamp(guess, limits.lo, limits.hi);
  double a = std::max(guess / kRatio, limits.lo);
  double b = guess;
  double c = std::min(guess * kRatio, limits.hi);
  double fa = safe_eval(f, a);
  double fb = safe_eval(f, b);
  double fc = safe_eval(f, c);
  int evals = 3;
  for (int it = 0; it < 200; ++it) {
    if (fa < fb && a > limits.lo) {
      c = b;
      fc = fb;
      b = a;
      fb = fa;
      a = std::max(b / kRatio, limits.lo);
      fa = safe_eval(f, a);
    } else if (fc < fb && c < limits.hi) {
      a = b;
      fa = fb;
      b = c;
      fb = fc;
      c = std::min(b * kRatio, limits.hi);
      fc = safe_eval(f, c);
    } else {
      break;
    }
    ++evals;
  }
  auto counted = [&](double x) {
    ++evals;
    return safe_eval(f, x);
  };
  std::uintmax_t iterations = static_cast<std::uintmax_t>(max_iter);
  const auto [x, v] = boost::math::tools::brent_find_minima(counted, a, c, bits, iterations);
  ScalarMinimum best{x, v, 0};
  for (auto [xi, vi] : {std::pair{a, fa}, std::pair{b, fb}, std::pair{c, fc}}) {
    if (vi < best.value) {
      best.x = xi;
      best.value = vi;
    }
  }
  best.evaluations = evals;
  return best;
}

void check_family_inputs(int n, double gamma, double total_time) {
  if (n < kMinFamilyQubits || n > kMaxFamilyQubits) {
    throw_invalid_argument("symmetric-family optimization supports 2 <= n <= 10, got " +
                           std::to_string(n));
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw_invalid_argument("optimization needs gamma > 0");
  }
  require_total_time_admissible(total_time, gamma);
}

Interval time_limits(int n, double total_time, double gamma) {
  return {1e-3 / (n * gamma), std::min(total_time, 10.0 / gamma)};
}

double vector_norm(std::span<const double> x) {
  return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

struct SimplexResult {
  std::vector<double> x;
  double value = kInf;
  int evaluations = 0;
};

// Nelder-Mead with the standard coefficients (reflection 1, expansion 2,
// contraction 1/2, shrink 1/2). Converged when the value spread is below
// tol_obj relative and the simplex diameter below sqrt(tol_x) relative.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::vector<double> x0, double step, const OptimizerConfig& cfg) {
  const std::size_t d = x0.size();
  std::vector<std::vector<double>> pts(d + 1, x0);
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
  std::vector<double> vals(d + 1);
  SimplexResult out;
  auto eval = [&](const std::vector<double>& x) {
    ++out.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : kInf;
  };
  for (std::size_t i = 0; i <= d; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(d + 1);
  auto point = [&](const std::vector<double>& base, const std::vector<double>& toward,
                   double coeff) {
    std::vector<double> p(d);
    for (std::size_t k = 0; k < d; ++k) p[k] = base[k] + coeff * (toward[k] - base[k]);
    return p;
  };
  const double size_tol = std::sqrt(cfg.tol_x);

  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[d - 1];

    if (std::isfinite(vals[worst])) {
      double diameter = 0.0;
      for (std::size_t i = 0; i <= d; ++i) {
        double dist2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          dist2 += (pts[i][k] - pts[best][k]) * (pts[i][k] - pts[best][k]);
        }
        diameter = std::max(diameter, std::sqrt(dist2));
      }
      const bool flat = vals[worst] - vals[best] <= cfg.tol_obj * std::abs(vals[best]);
      if (flat && diameter <= size_tol * std::max(1.0, vector_norm(pts[best]))) break;
    }

    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < d; ++k) centroid[k] += pts[i][k] / static_cast<double>(d);
    }

    const auto reflected = point(centroid, pts[worst], -1.0);
    const double f_reflected = eval(reflected);
    if (f_reflected < vals[best]) {
      auto expanded = point(centroid, pts[worst], -2.0);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        pts[worst] = std::move(expanded);
        vals[worst] = f_expanded;
      } else {
        pts[worst] = reflected;
        vals[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < vals[second_worst]) {
      pts[worst] = reflected;
      vals[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < vals[worst];
    auto contracted = outside ? point(centroid, reflected, 0.5) : point(centroid, pts[worst], 0.5);
    const double f_contracted = eval(contracted);
    if (outside ? f_contracted <= f_reflected : f_contracted < vals[worst]) {
      pts[worst] = std::move(contracted);
      vals[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == best) continue;
      pts[i] = point(pts[best], pts[i], 0.5);
      vals[i] = eval(pts[i]);
    }
  }

  const auto best_it = std::min_element(vals.begin(), vals.end());
  out.value = *best_it;
  out.x = pts[static_cast<std::size_t>(best_it - vals.begin())];
  return out;
}

std::vector<double> random_start(std::uint64_t seed, int restart, std::size_t dim) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 gen(seq);
  std::vector<double> x(dim);
  for (auto& v : x) {
    // 53 random mantissa bits, mapped to [-1, 1).
    v = 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
  }
  return x;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (restarts < 1) throw_invalid_argument("optimizer needs at least one restart");
  if (!(tol_obj > 0.0) || !(tol_x > 0.0)) throw_invalid_argument("tolerances must be positive");
  if (max_iter < 1) throw_invalid_argument("max_iter must be >= 1");
}

ScalarMinimum minimize_over_t(const Objective& objective, Interval bracket,
                              const OptimizerConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(bracket.lo) || !std::isfinite(bracket.hi) || !(bracket.lo < bracket.hi)) {
    throw_invalid_argument("bracket must be a finite interval with lo < hi");
  }
  const bool geometric = bracket.lo > 0.0 && bracket.hi / bracket.lo > 10.0;
  std::vector<double> xs(kScanPoints);
  std::vector<double> fs(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) {
    const double u = static_cast<double>(i) / (kScanPoints - 1);
    xs[static_cast<std::size_t>(i)] =
        geometric ? bracket.lo * std::pow(bracket.hi / bracket.lo, u)
                  : bracket.lo + u * (bracket.hi - bracket.lo);
  }
  xs.back() = bracket.hi;
  std::size_t best = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fs[i] = safe_eval(objective, xs[i]);
    if (fs[i] < fs[best]) best = i;
  }
  if (!std::isfinite(fs[best])) {
    throw Error(ErrorCode::kBracketing, "objective is not finite anywhere on the bracket");
  }
  const double a = xs[best == 0 ? 0 : best - 1];
  const double b = xs[std::min(best + 1, xs.size() - 1)];
  ScalarMinimum refined = golden_section(objective, a, b, cfg.tol_x, cfg.max_iter);
  refined.evaluations += kScanPoints;
  if (!(refined.value <= fs[best])) {
    refined.x = xs[best];
    refined.value = fs[best];
  }
  return refined;
}

PrecisionResult optimize_closed_form(Scheme scheme, int n, double total_time, double gamma,
                                     const OptimizerConfig& cfg) {
  if (scheme != Scheme::kUncorrelated && scheme != Scheme::kGhz) {
    throw_invalid_argument("closed-form optimization supports uncorrelated and ghz schemes");
  }
  if (n < 1) throw_invalid_argument("ion count must be >= 1");
  if (!(gamma > 0.0)) throw_invalid_argument("optimization needs gamma > 0");
  require_total_time_admissible(total_time, gamma);

  const double phase_span = scheme == Scheme::kGhz ? std::numbers::pi / n : std::numbers::pi;
  auto uncertainty = [&](double t, double phase) {
    const ExperimentBudget budget{n, total_time, t};
    return scheme == Scheme::kGhz ? uncertainty_ghz(budget, phase / t, gamma)
                                  : uncertainty_uncorrelated(budget, phase / t, gamma);
  };
  auto best_phase = [&](double t) {
    return minimize_over_t([&](double phase) { return uncertainty(t, phase); },
                           Interval{0.0, phase_span}, cfg);
  };
  const ScalarMinimum outer = minimize_over_t([&](double t) { return best_phase(t).value; },
                                              time_limits(n, total_time, gamma), cfg);
  const ScalarMinimum inner = best_phase(outer.x);

  PrecisionResult result;
  result.scheme = scheme;
  result.t_opt = outer.x;
  result.phase_opt = inner.x;
  result.delta_omega = inner.value;
  result.improvement_pct =
      improvement_pct(result.delta_omega, reference_limit(n, total_time, gamma));
  return result;
}

PrecisionResult optimize_qfi_over_t(const Objective& qfi_of_t, int n, double total_time,
                                    double gamma, const OptimizerConfig& cfg) {
  if (n < 1) throw_invalid_argument("ion count must be >= 1");
  if (!(gamma > 0.0)) throw_invalid_argument("optimization needs gamma > 0");
  require_total_time_admissible(total_time, gamma);
  const ScalarMinimum best = minimize_over_t(
      [&](double t) { return qfi_uncertainty(qfi_of_t(t), total_time, t); },
      time_limits(n, total_time, gamma), cfg);

  PrecisionResult result;
  result.scheme = Scheme::kSymmetricQfi;
  result.t_opt = best.x;
  result.phase_opt = 0.0;
  result.delta_omega = best.value;
  result.improvement_pct =
      improvement_pct(result.delta_omega, reference_limit(n, total_time, gamma));
  return result;
}

std::function<double(double)> dense_qfi_of_t(const StateVector& psi, double gamma, double delta) {
  DensityMatrix rho0 = to_density(psi);
  return [rho0 = std::move(rho0), gamma, delta](double t) {
    const DephasingParams p{delta, gamma, t};
    return qfi(dephase_evolve(rho0, p), drho_ddelta(rho0, p)).qfi;
  };
}

std::string_view method_name(CoeffMethod method) {
  return method == CoeffMethod::kGenRamsey ? "gen-ramsey" : "qfi";
}

std::optional<CoeffMethod> parse_method(std::string_view name) {
  if (name == "gen-ramsey") return CoeffMethod::kGenRamsey;
  if (name == "qfi") return CoeffMethod::kQfi;
  return std::nullopt;
}

std::vector<double> canonical_coeffs(std::span<const double> a) {
  const double norm = vector_norm(a);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw_invalid_argument("coefficient vector must be finite and nonzero");
  }
  std::vector<double> out(a.begin(), a.end());
  for (auto& v : out) v /= norm;
  const auto first = std::find_if(out.begin(), out.end(), [](double v) { return std::abs(v) > 1e-12; });
  if (first != out.end() && *first < 0.0) {
    for (auto& v : out) v = -v;
  }
  return out;
}

namespace {

// Objective of the coefficient search. With a time guess the QFI branch
// uses a local bracket around it and the loose inner tolerance.
CoeffEvaluation evaluate_coeffs(int n, std::span<const double> a, double gamma,
                                double total_time, double reference, CoeffMethod method,
                                const OptimizerConfig& cfg, std::optional<double> t_guess) {
  const StateVector psi = symmetric_state(n, a);
  if (method == CoeffMethod::kGenRamsey) {
    const CollectiveMoments m = collective_moments(psi);
    if (std::abs(m.sx_mean) <= 1e-12 * n || m.sy_variance() <= 1e-12 * n) return {kInf, 0.0};
    const PrecisionResult r = genramsey_opt_uncertainty(m, total_time, gamma);
    return {r.delta_omega / reference, r.t_opt};
  }

  const SymmetricPhaseQfi phase_qfi(psi);
  const Objective objective = [&](double t) {
    return qfi_uncertainty(phase_qfi(gamma, t), total_time, t);
  };
  const Interval limits = time_limits(n, total_time, gamma);
  const ScalarMinimum best = t_guess
      ? refine_near(objective, *t_guess, limits, kInnerTimeBits, cfg.max_iter)
      : minimize_over_t(objective, limits, cfg);
  return {best.value / reference, best.x};
}

}  // namespace

CoeffEvaluation evaluate_symmetric_coeffs(int n, std::span<const double> a, double gamma,
                                          double total_time, CoeffMethod method,
                                          const OptimizerConfig& cfg) {
  check_family_inputs(n, gamma, total_time);
  cfg.validate();
  const std::vector<double> unit = canonical_coeffs(a);
  return evaluate_coeffs(n, unit, gamma, total_time, reference_limit(n, total_time, gamma),
                         method, cfg, std::nullopt);
}

CoefficientOptimum optimize_symmetric_coeffs(int n, double gamma, double total_time,
                                             CoeffMethod method, const OptimizerConfig& cfg,
                                             std::span<const double> warm_start) {
  check_family_inputs(n, gamma, total_time);
  cfg.validate();
  const std::size_t dim = symmetric_coeff_count(n);
  const double reference = reference_limit(n, total_time, gamma);

  std::vector<std::vector<double>> starts;
  if (method == CoeffMethod::kQfi) {
    if (!warm_start.empty()) {
      if (warm_start.size() != dim) throw_invalid_argument("warm start has the wrong dimension");
      starts.push_back(canonical_coeffs(warm_start));
    } else {
      starts.push_back(
          optimize_symmetric_coeffs(n, gamma, total_time, CoeffMethod::kGenRamsey, cfg).coeffs);
    }
  }
  starts.push_back(uncorrelated_coeffs(n));
  for (int r = static_cast<int>(starts.size()); r < cfg.restarts; ++r) {
    starts.push_back(random_start(cfg.seed, r, dim));
  }
  starts.resize(static_cast<std::size_t>(cfg.restarts));

  std::vector<RestartOutcome> outcomes(starts.size());
  parallel_for(starts.size(), [&](std::size_t r) {
    RestartOutcome& out = outcomes[r];
    out.restart = static_cast<int>(r);
    std::optional<double> t_guess;
    auto objective = [&](std::span<const double> x) {
      const double norm = vector_norm(x);
      if (!(norm > 1e-12) || !std::isfinite(norm)) return kInf;
      std::vector<double> unit(x.begin(), x.end());
      for (auto& v : unit) v /= norm;
      const CoeffEvaluation e =
          evaluate_coeffs(n, unit, gamma, total_time, reference, method, cfg, t_guess);
      if (std::isfinite(e.ratio)) t_guess = e.t_opt;
      return e.ratio;
    };

    SimplexResult sr = nelder_mead(objective, starts[r], 0.3, cfg);
    // Polish from the normalized optimum with a fresh, smaller simplex.
    if (std::isfinite(sr.value)) {
      SimplexResult polish = nelder_mead(objective, canonical_coeffs(sr.x), 0.05, cfg);
      polish.evaluations += sr.evaluations;
      if (polish.value <= sr.value) sr = std::move(polish);
      else sr.evaluations = polish.evaluations;
    }
    out.evaluations = sr.evaluations;
    if (!std::isfinite(sr.value)) return;

    out.coeffs = canonical_coeffs(sr.x);
    const CoeffEvaluation fresh = evaluate_coeffs(n, out.coeffs, gamma, total_time, reference,
                                                  method, cfg, std::nullopt);
    if (!std::isfinite(fresh.ratio)) return;
    out.ok = true;
    out.improvement_pct = 100.0 * (1.0 - fresh.ratio);
    out.t_opt = fresh.t_opt;
  });

  const RestartOutcome* best = nullptr;
  double lo = kInf;
  double hi = -kInf;
  for (const auto& o : outcomes) {
    if (!o.ok) continue;
    lo = std::min(lo, o.improvement_pct);
    hi = std::max(hi, o.improvement_pct);
    if (best == nullptr || o.improvement_pct > best->improvement_pct) best = &o;
  }
  if (best == nullptr) {
    throw Error(ErrorCode::kOptimizationFailure,
                "every restart ended on a degenerate preparation (n=" + std::to_string(n) + ")");
  }

  CoefficientOptimum result;
  result.n = n;
  result.method = method;
  result.improvement_pct = best->improvement_pct;
  result.reference = reference;
  result.delta_omega = reference * (1.0 - best->improvement_pct / 100.0);
  result.t_opt = best->t_opt;
  result.coeffs = best->coeffs;
  result.restart_spread_pct = hi - lo;
  result.restarts = std::move(outcomes);
  return result;
}

std::vector<ImprovementCurvePoint> improvement_curve(int n_min, int n_max, double gamma,
                                              double total_time, const OptimizerConfig& cfg) {
  if (n_min < kMinFamilyQubits || n_max > kMaxFamilyQubits || n_min > n_max) {
    throw_invalid_argument("ion range must satisfy 2 <= n_min <= n_max <= 10");
  }
  check_family_inputs(n_min, gamma, total_time);
  cfg.validate();

  std::vector<ImprovementCurvePoint> points;
  for (int n = n_min; n <= n_max; ++n) {
    ImprovementCurvePoint point;
    point.n = n;
    try {
      point.genramsey = optimize_symmetric_coeffs(n, gamma, total_time, CoeffMethod::kGenRamsey, cfg);
      point.improvement_genramsey_pct = point.genramsey->improvement_pct;
      point.qfi = optimize_symmetric_coeffs(n, gamma, total_time, CoeffMethod::kQfi, cfg,
                                            point.genramsey->coeffs);
      point.improvement_qfi_pct = point.qfi->improvement_pct;
      point.best_coeffs = point.qfi->coeffs;
    } catch (const Error& e) {
      point.failure = e.what();
    }
    points.push_back(std::move(point));
  }
  return points;
}

std::vector<UncertaintyScanRow> uncertainty_scan(int n, double gamma, double total_time,
                               std::span<const double> t_grid,
                               std::optional<double> fixed_detuning) {
  if (n < 1) throw_invalid_argument("ion count must be >= 1");
  require_total_time_admissible(total_time, gamma);
  std::vector<UncertaintyScanRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t > 0.0) || t > total_time) {
      throw_invalid_argument("scan times must lie in (0, T]");
    }
    const ExperimentBudget budget{n, total_time, t};
    const double delta_unc = fixed_detuning ? *fixed_detuning : std::numbers::pi / (2.0 * t);
    const double delta_ghz = fixed_detuning ? *fixed_detuning : std::numbers::pi / (2.0 * n * t);
    UncertaintyScanRow row;
    row.t = t;
    try {
      row.delta_omega_uncorrelated = uncertainty_uncorrelated(budget, delta_unc, gamma);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSingularPoint) throw;
      row.delta_omega_uncorrelated = std::numeric_limits<double>::quiet_NaN();
    }
    try {
      row.delta_omega_ghz = uncertainty_ghz(budget, delta_ghz, gamma);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSingularPoint) throw;
      row.delta_omega_ghz = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace clocksim
