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

#include "cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/output.hpp"
#include "clocksim/error.hpp"
#include "clocksim/evolution.hpp"
#include "clocksim/fisher.hpp"
#include "clocksim/optimize.hpp"
#include "clocksim/qstate.hpp"
#include "clocksim/ramsey.hpp"

namespace clocksim::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kMaxCliQubits = 10;

struct OutputOptions {
  std::string format = "csv";
  std::string path;
};

struct TimeGrid {
  std::optional<double> t;
  std::optional<double> t_min;
  std::optional<double> t_max;
  int t_steps = 1;
  std::string spacing = "linear";
};

struct SignalOptions {
  std::string scheme = "uncorrelated";
  int n = 0;
  double gamma = 0.0;
  double detuning = 0.0;
  TimeGrid grid;
};

struct ScanOptions {
  int n = 0;
  double gamma = 1.0;
  double total_time = 100.0;
  std::optional<double> detuning;
  TimeGrid grid{std::nullopt, 0.01, 2.0, 200, "linear"};
};

struct OptimizeOptions {
  int n_min = 0;
  int n_max = 0;
  std::string method = "both";
  double gamma = 1.0;
  double total_time = 100.0;
  OptimizerConfig optimizer;
};

struct QfiOptions {
  std::string scheme;
  std::string coeffs;
  int n = 0;
  double gamma = 0.0;
  double detuning = 0.0;
  std::optional<double> t;
  double total_time = 100.0;
  bool optimize_t = false;
  OptimizerConfig optimizer;
};

// Rendered report text and any warnings destined for stderr.
struct Report {
  std::string text;
  std::vector<std::string> warnings;
};

Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json report_header(std::string_view command) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["convention"] = std::string(kConventionNote);
  j["command"] = std::string(command);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void require_format(const OutputOptions& out) {
  if (out.format != "csv" && out.format != "json") {
    throw_invalid_argument("format must be csv or json");
  }
}

std::vector<double> build_grid(const TimeGrid& g, bool allow_zero) {
  if (g.t) {
    if (!std::isfinite(*g.t) || *g.t < 0.0 || (!allow_zero && *g.t == 0.0)) {
      throw_invalid_argument(allow_zero ? "--t must be >= 0" : "--t must be > 0");
    }
    return {*g.t};
  }
  if (!g.t_min || !g.t_max) throw_invalid_argument("give --t or both --t-min and --t-max");
  const double lo = *g.t_min;
  const double hi = *g.t_max;
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw_invalid_argument("grid bounds must be finite");
  if (allow_zero ? lo < 0.0 : lo <= 0.0) {
    throw_invalid_argument(allow_zero ? "--t-min must be >= 0" : "--t-min must be > 0");
  }
  if (hi < lo) throw_invalid_argument("--t-max must be >= --t-min");
  if (g.t_steps < 1) throw_invalid_argument("--t-steps must be >= 1");
  if (g.spacing != "linear" && g.spacing != "log") {
    throw_invalid_argument("--t-spacing must be linear or log");
  }
  if (g.spacing == "log" && lo <= 0.0) throw_invalid_argument("log spacing needs --t-min > 0");
  std::vector<double> grid(static_cast<std::size_t>(g.t_steps));
  for (int i = 0; i < g.t_steps; ++i) {
    const double u = g.t_steps == 1 ? 0.0 : static_cast<double>(i) / (g.t_steps - 1);
    grid[static_cast<std::size_t>(i)] =
        g.spacing == "log" ? lo * std::pow(hi / lo, u) : lo + u * (hi - lo);
  }
  if (g.t_steps > 1) grid.back() = hi;
  return grid;
}

Report run_signal(const SignalOptions& o, const OutputOptions& out) {
  require_format(out);
  const auto scheme = parse_scheme(o.scheme);
  if (!scheme || (*scheme != Scheme::kUncorrelated && *scheme != Scheme::kGhz)) {
    throw_invalid_argument("--scheme must be uncorrelated or ghz");
  }
  if (o.n < 1) throw_invalid_argument("--n must be >= 1");
  if (!(o.gamma >= 0.0) || !std::isfinite(o.gamma)) throw_invalid_argument("--gamma must be >= 0");
  if (!std::isfinite(o.detuning)) throw_invalid_argument("--detuning must be finite");
  const std::vector<double> grid = build_grid(o.grid, true);

  CsvWriter csv({"t", "delta", "gamma", "scheme", "P"});
  Json rows = Json::array();
  for (double t : grid) {
    const double p = *scheme == Scheme::kGhz ? signal_ghz(o.n, o.detuning, t, o.gamma)
                                             : signal_uncorrelated(o.detuning, t, o.gamma);
    csv.add_row({format_double(t), format_double(o.detuning), format_double(o.gamma), o.scheme,
                 format_double(p)});
    rows.push_back({{"t", t}, {"delta", o.detuning}, {"gamma", o.gamma}, {"scheme", o.scheme},
                    {"P", p}});
  }
  if (out.format == "csv") return {csv.str(), {}};
  Json j = report_header("signal");
  j["n"] = o.n;
  j["rows"] = std::move(rows);
  return {dump(j), {}};
}

Report run_scan(const ScanOptions& o, const OutputOptions& out) {
  require_format(out);
  if (o.n < 1) throw_invalid_argument("--n must be >= 1");
  if (!(o.gamma > 0.0) || !std::isfinite(o.gamma)) throw_invalid_argument("--gamma must be > 0");
  require_total_time_admissible(o.total_time, o.gamma);
  if (o.detuning && !std::isfinite(*o.detuning)) throw_invalid_argument("--detuning must be finite");
  const std::vector<double> grid = build_grid(o.grid, false);
  if (grid.back() > o.total_time) throw_invalid_argument("grid exceeds the total time");

  const auto rows = uncertainty_scan(o.n, o.gamma, o.total_time, grid, o.detuning);
  Report report;
  CsvWriter csv({"t", "delta_omega_uncorrelated", "delta_omega_ghz"});
  Json jrows = Json::array();
  for (const auto& r : rows) {
    if (std::isnan(r.delta_omega_uncorrelated) || std::isnan(r.delta_omega_ghz)) {
      report.warnings.push_back("warning: code=singular-point t=" + format_double(r.t));
    }
    csv.add_row({format_double(r.t), format_double(r.delta_omega_uncorrelated),
                 format_double(r.delta_omega_ghz)});
    jrows.push_back({{"t", r.t},
                     {"delta_omega_uncorrelated", json_number(r.delta_omega_uncorrelated)},
                     {"delta_omega_ghz", json_number(r.delta_omega_ghz)}});
  }
  if (out.format == "csv") {
    report.text = csv.str();
  } else {
    Json j = report_header("scan");
    j["n"] = o.n;
    j["gamma"] = o.gamma;
    j["total_time"] = o.total_time;
    if (o.detuning) j["detuning"] = *o.detuning;
    j["reference_limit"] = reference_limit(o.n, o.total_time, o.gamma);
    j["rows"] = std::move(jrows);
    report.text = dump(j);
  }
  return report;
}

Json optimum_json(const CoefficientOptimum& opt) {
  Json j;
  j["status"] = "ok";
  j["n"] = opt.n;
  j["method"] = std::string(method_name(opt.method));
  j["improvement_pct"] = opt.improvement_pct;
  j["delta_omega"] = opt.delta_omega;
  j["reference_limit"] = opt.reference;
  j["t_opt"] = opt.t_opt;
  j["coeffs"] = opt.coeffs;
  j["restart_spread_pct"] = opt.restart_spread_pct;
  Json restarts = Json::array();
  for (const auto& r : opt.restarts) {
    Json jr;
    jr["restart"] = r.restart;
    jr["ok"] = r.ok;
    jr["improvement_pct"] = json_number(r.ok ? r.improvement_pct : NAN);
    jr["t_opt"] = json_number(r.ok ? r.t_opt : NAN);
    jr["coeffs"] = r.coeffs;
    jr["evaluations"] = r.evaluations;
    restarts.push_back(std::move(jr));
  }
  j["restarts"] = std::move(restarts);
  return j;
}

struct OptimizeOutcome {
  Report report;
  int succeeded = 0;
  int attempted = 0;
};

OptimizeOutcome run_optimize(const OptimizeOptions& o, const OutputOptions& out) {
  require_format(out);
  if (o.n_min < 2 || o.n_max > kMaxCliQubits || o.n_min > o.n_max) {
    throw_invalid_argument("ion range must satisfy 2 <= n-min <= n-max <= 10");
  }
  if (o.method != "gen-ramsey" && o.method != "qfi" && o.method != "both") {
    throw_invalid_argument("--method must be gen-ramsey, qfi or both");
  }
  if (!(o.gamma > 0.0) || !std::isfinite(o.gamma)) throw_invalid_argument("--gamma must be > 0");
  require_total_time_admissible(o.total_time, o.gamma);
  o.optimizer.validate();

  std::vector<CoeffMethod> methods;
  if (o.method != "qfi") methods.push_back(CoeffMethod::kGenRamsey);
  if (o.method != "gen-ramsey") methods.push_back(CoeffMethod::kQfi);

  OptimizeOutcome outcome;
  CsvWriter csv({"n", "method", "improvement_pct", "t_opt", "coeffs", "status"});
  Json points = Json::array();
  for (int n = o.n_min; n <= o.n_max; ++n) {
    std::optional<CoefficientOptimum> genramsey;
    for (CoeffMethod method : methods) {
      ++outcome.attempted;
      const std::string name(method_name(method));
      try {
        std::span<const double> warm;
        if (method == CoeffMethod::kQfi && genramsey) warm = genramsey->coeffs;
        CoefficientOptimum opt =
            optimize_symmetric_coeffs(n, o.gamma, o.total_time, method, o.optimizer, warm);
        csv.add_row({std::to_string(n), name, format_double(opt.improvement_pct),
                     format_double(opt.t_opt), join_coeffs(opt.coeffs), "ok"});
        points.push_back(optimum_json(opt));
        if (method == CoeffMethod::kGenRamsey) genramsey = std::move(opt);
        ++outcome.succeeded;
      } catch (const Error& e) {
        if (e.is_argument_error()) throw;
        csv.add_row({std::to_string(n), name, "nan", "nan", "", "failed"});
        points.push_back({{"status", "failed"},
                          {"n", n},
                          {"method", name},
                          {"reason", std::string(error_code_name(e.code()))},
                          {"message", e.what()}});
        outcome.report.warnings.push_back("warning: code=" + std::string(error_code_name(e.code())) +
                                          " n=" + std::to_string(n) + " method=" + name);
      }
    }
  }
  if (out.format == "csv") {
    outcome.report.text = csv.str();
  } else {
    Json j = report_header("optimize");
    j["gamma"] = o.gamma;
    j["total_time"] = o.total_time;
    j["seed"] = o.optimizer.seed;
    j["restarts"] = o.optimizer.restarts;
    j["tol_obj"] = o.optimizer.tol_obj;
    j["tol_x"] = o.optimizer.tol_x;
    j["max_iter"] = o.optimizer.max_iter;
    j["points"] = std::move(points);
    outcome.report.text = dump(j);
  }
  return outcome;
}

Report run_qfi(const QfiOptions& o, const OutputOptions& out) {
  if (out.format != "json") throw_invalid_argument("qfi reports are JSON only (--format json)");
  if (o.n < 1 || o.n > kMaxCliQubits) throw_invalid_argument("--n must lie in [1, 10]");
  if (o.scheme.empty() == o.coeffs.empty()) {
    throw_invalid_argument("give exactly one of --scheme or --coeffs");
  }
  if (!(o.gamma >= 0.0) || !std::isfinite(o.gamma)) throw_invalid_argument("--gamma must be >= 0");
  if (!std::isfinite(o.detuning)) throw_invalid_argument("--detuning must be finite");
  if (!(o.total_time > 0.0) || !std::isfinite(o.total_time)) {
    throw_invalid_argument("--total-time must be positive");
  }

  Json j = report_header("qfi");
  j["n"] = o.n;
  std::optional<StateVector> psi;
  if (!o.scheme.empty()) {
    if (o.scheme == "uncorrelated") {
      psi = product_superposition(o.n);
    } else if (o.scheme == "ghz") {
      psi = ghz(o.n);
    } else {
      throw_invalid_argument("--scheme must be uncorrelated or ghz");
    }
    j["scheme"] = o.scheme;
  } else {
    const std::vector<double> a = parse_coeffs(o.coeffs);
    psi = symmetric_state(o.n, a);
    j["coeffs"] = a;
  }
  j["gamma"] = o.gamma;
  j["detuning"] = o.detuning;
  j["total_time"] = o.total_time;

  double t = 0.0;
  if (o.optimize_t) {
    if (o.t) throw_invalid_argument("--t and --optimize-t are mutually exclusive");
    if (!(o.gamma > 0.0)) throw_invalid_argument("--optimize-t needs --gamma > 0");
    o.optimizer.validate();
    const SymmetricPhaseQfi phase_qfi(*psi);
    const PrecisionResult best = optimize_qfi_over_t(
        [&](double s) { return phase_qfi(o.gamma, s); }, o.n, o.total_time, o.gamma, o.optimizer);
    t = best.t_opt;
  } else {
    if (!o.t) throw_invalid_argument("give --t or --optimize-t");
    t = *o.t;
    ExperimentBudget{o.n, o.total_time, t}.validate();
  }

  const DensityMatrix rho0 = to_density(*psi);
  const DephasingParams params{o.detuning, o.gamma, t};
  const QfiResult r = qfi(dephase_evolve(rho0, params), drho_ddelta(rho0, params));
  const double uncertainty = qfi_uncertainty(r.qfi, o.total_time, t);

  j["t"] = t;
  j["qfi"] = r.qfi;
  j["classical_fi_sld"] = r.classical_fi_check;
  j["qfi_uncertainty"] = uncertainty;
  if (o.optimize_t) {
    j["t_opt"] = t;
    j["min_uncertainty"] = uncertainty;
  }
  if (o.gamma > 0.0) {
    const double ref = reference_limit(o.n, o.total_time, o.gamma);
    j["reference_limit"] = ref;
    j["improvement_pct"] = improvement_pct(uncertainty, ref);
  }
  return {dump(j), {}};
}

// Reads a flat key=value file into "--key=value" arguments.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_invalid_argument("cannot open config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw_invalid_argument("config line " + std::to_string(lineno) + " is not key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    if (key.empty()) throw_invalid_argument("config line " + std::to_string(lineno) + " has no key");
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

// Splices config-file arguments in front of the command-line flags of the
// subcommand so that explicit flags win (options keep the last value).
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw_invalid_argument("--config needs a path");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return args;
  const auto command = std::find_if(args.begin(), args.end(),
                                    [](const std::string& a) { return !a.starts_with("-"); });
  if (command == args.end()) throw_invalid_argument("--config needs a subcommand");
  const std::vector<std::string> extra = read_config(*path);
  args.insert(command + 1, extra.begin(), extra.end());
  return args;
}

void report_error(std::ostream& err, std::string_view code, std::string message) {
  std::replace(message.begin(), message.end(), '\n', ' ');
  std::replace(message.begin(), message.end(), '"', '\'');
  err << "error: code=" << code << " message=\"" << message << "\"\n";
}

void add_output_options(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--format", out.format, "Report format: csv or json");
  cmd->add_option("-o,--output", out.path, "Report path (default: stdout)");
}

void add_optimizer_options(CLI::App* cmd, OptimizerConfig& cfg) {
  cmd->add_option("--seed", cfg.seed, "Master seed for random restarts");
  cmd->add_option("--restarts", cfg.restarts, "Simplex restarts per point");
  cmd->add_option("--tol-obj", cfg.tol_obj, "Relative objective tolerance");
  cmd->add_option("--tol-x", cfg.tol_x, "Relative parameter tolerance");
  cmd->add_option("--max-iter", cfg.max_iter, "Iteration cap per search");
}

void add_grid(CLI::App* cmd, TimeGrid& g) {
  cmd->add_option("--t", g.t, "Single-shot duration t");
  cmd->add_option("--t-min", g.t_min, "First grid point");
  cmd->add_option("--t-max", g.t_max, "Last grid point");
  cmd->add_option("--t-steps", g.t_steps, "Number of grid points");
  cmd->add_option("--t-spacing", g.spacing, "linear or log");
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"clocksim: Ramsey spectroscopy of n dephasing ions: signals, uncertainty scans, "
               "Fisher information and entangled-state optimization"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
  app.footer(std::string("Convention: ") + std::string(kConventionNote) +
             ". Flags may also come from a key=value file given with --config.");

  OutputOptions output;
  SignalOptions signal;
  ScanOptions scan;
  OptimizeOptions optimize;
  QfiOptions qfi_opts;

  auto* sig = app.add_subcommand("signal", "Ramsey signal P for uncorrelated or GHZ preparations");
  sig->add_option("--scheme", signal.scheme, "uncorrelated or ghz");
  sig->add_option("--n", signal.n, "Number of ions")->required();
  sig->add_option("--gamma", signal.gamma, "Dephasing rate 1/tau_dec");
  sig->add_option("--detuning", signal.detuning, "Detuning delta = omega - omega_0");
  add_grid(sig, signal.grid);
  add_output_options(sig, output);

  auto* sc = app.add_subcommand("scan", "Frequency uncertainty against single-shot duration");
  sc->add_option("--n", scan.n, "Number of ions")->required();
  sc->add_option("--gamma", scan.gamma, "Dephasing rate");
  sc->add_option("--total-time", scan.total_time, "Total experiment time T");
  sc->add_option("--detuning", scan.detuning,
                 "Fixed detuning (default: phase locked at the optimum)");
  add_grid(sc, scan.grid);
  add_output_options(sc, output);

  auto* opt = app.add_subcommand("optimize", "Optimize symmetric partially entangled preparations");
  opt->add_option("--n-min", optimize.n_min, "Smallest ion count (>= 2)")->required();
  opt->add_option("--n-max", optimize.n_max, "Largest ion count (<= 10)")->required();
  opt->add_option("--method", optimize.method, "gen-ramsey, qfi or both");
  opt->add_option("--gamma", optimize.gamma, "Dephasing rate");
  opt->add_option("--total-time", optimize.total_time, "Total experiment time T");
  add_optimizer_options(opt, optimize.optimizer);
  add_output_options(opt, output);

  auto* q = app.add_subcommand("qfi", "Quantum Fisher information and optimal-measurement bound");
  q->add_option("--scheme", qfi_opts.scheme, "uncorrelated or ghz");
  q->add_option("--coeffs", qfi_opts.coeffs, "Symmetric-family coefficients a_0;a_1;...");
  q->add_option("--n", qfi_opts.n, "Number of ions")->required();
  q->add_option("--gamma", qfi_opts.gamma, "Dephasing rate");
  q->add_option("--detuning", qfi_opts.detuning, "Detuning");
  q->add_option("--t", qfi_opts.t, "Single-shot duration");
  q->add_option("--total-time", qfi_opts.total_time, "Total experiment time T");
  q->add_flag("--optimize-t", qfi_opts.optimize_t, "Minimize the uncertainty over t");
  add_optimizer_options(q, qfi_opts.optimizer);
  OutputOptions qfi_output{"json", {}};
  add_output_options(q, qfi_output);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "invalid-argument", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    report_error(err, error_code_name(e.code()), e.what());
    return kExitUsage;
  }

  int code = kExitOk;
  Report report;
  try {
    if (*sig) {
      report = run_signal(signal, output);
    } else if (*sc) {
      report = run_scan(scan, output);
    } else if (*opt) {
      OptimizeOutcome outcome = run_optimize(optimize, output);
      report = std::move(outcome.report);
      if (outcome.succeeded == 0) code = kExitNumerical;
    } else {
      report = run_qfi(qfi_opts, qfi_output);
      output = qfi_output;
    }
  } catch (const Error& e) {
    report_error(err, error_code_name(e.code()), e.what());
    return e.is_argument_error() ? kExitUsage : kExitNumerical;
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return kExitNumerical;
  }

  for (const auto& w : report.warnings) err << w << '\n';
  if (code != kExitOk) {
    report_error(err, "optimization-failure", "no point of the sweep succeeded");
    return code;
  }
  if (output.path.empty()) {
    out << report.text;
    return kExitOk;
  }
  std::ofstream file(output.path, std::ios::binary | std::ios::trunc);
  if (!file) {
    report_error(err, "invalid-argument", "cannot open output file '" + output.path + "'");
    return kExitUsage;
  }
  file << report.text;
  return kExitOk;
}

}  // namespace clocksim::cli
