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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "cli/cli.hpp"
#include "cli/output.hpp"
#include "clocksim/error.hpp"
#include "clocksim/optimize.hpp"
#include "clocksim/ramsey.hpp"

namespace clocksim::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

// Parsed CSV body: header and rows, with the convention comment checked.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) cells.push_back(cell);
  if (!line.empty() && line.back() == sep) cells.emplace_back();
  return cells;
}

Csv parse_csv(const std::string& text) {
  EXPECT_EQ(text.find('\r'), std::string::npos);
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "# convention: " + std::string(kConventionNote));
  Csv csv;
  std::getline(ss, line);
  csv.header = split(line, ',');
  while (std::getline(ss, line)) {
    csv.rows.push_back(split(line, ','));
    EXPECT_EQ(csv.rows.back().size(), csv.header.size()) << line;
  }
  return csv;
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("clocksim_cli_test_" + std::to_string(::getpid()) +
                                                  "_" + std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(CliSignal, GhzRowAtQuarterPeriod) {
  const auto r = invoke({"signal", "--scheme", "ghz", "--n", "2", "--gamma", "0", "--detuning",
                         "1", "--t", "0.7853981634"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Csv csv = parse_csv(r.out);
  EXPECT_EQ(csv.header, (std::vector<std::string>{"t", "delta", "gamma", "scheme", "P"}));
  ASSERT_EQ(csv.rows.size(), 1u);
  EXPECT_EQ(csv.rows[0][3], "ghz");
  EXPECT_NEAR(std::stod(csv.rows[0][4]), 0.5 * (1.0 + std::cos(2.0 * 0.7853981634)), 1e-15);
}

TEST(CliSignal, ZeroTimeGivesUnitSignal) {
  const auto r = invoke({"signal", "--n", "3", "--t", "0", "--gamma", "0.4", "--detuning", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(parse_csv(r.out).rows[0][4], "1");
}

TEST(CliSignal, MissingIonCountIsAUsageError) {
  TempDir dir;
  const auto path = dir / "signal.csv";
  const auto r = invoke({"signal", "--t", "0", "--output", path.string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(r.err.rfind("error: code=invalid-argument message=", 0), 0u) << r.err;
  EXPECT_FALSE(fs::exists(path));
}

TEST(CliSignal, GridRowsRoundTrip) {
  const auto r = invoke({"signal", "--scheme", "uncorrelated", "--n", "4", "--gamma", "0.3",
                         "--detuning", "1.7", "--t-min", "0", "--t-max", "3", "--t-steps", "31"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Csv csv = parse_csv(r.out);
  ASSERT_EQ(csv.rows.size(), 31u);
  for (const auto& row : csv.rows) {
    const double p = signal_uncorrelated(std::stod(row[1]), std::stod(row[0]), std::stod(row[2]));
    EXPECT_NEAR(std::stod(row[4]), p, 1e-9);
  }
}

TEST(CliSignal, JsonReport) {
  const auto r = invoke({"signal", "--n", "2", "--scheme", "ghz", "--t-min", "0.1", "--t-max",
                         "0.2", "--t-steps", "2", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["convention"], std::string(kConventionNote));
  EXPECT_EQ(j["rows"].size(), 2u);
  EXPECT_DOUBLE_EQ(j["rows"][1]["t"].get<double>(), 0.2);
}

TEST(CliScan, SingleRowAtHalfDecoherenceTime) {
  const auto r = invoke({"scan", "--n", "3", "--gamma", "1", "--total-time", "100", "--t-min",
                         "0.5", "--t-max", "0.5", "--t-steps", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Csv csv = parse_csv(r.out);
  EXPECT_EQ(csv.header, (std::vector<std::string>{"t", "delta_omega_uncorrelated",
                                                  "delta_omega_ghz"}));
  ASSERT_EQ(csv.rows.size(), 1u);
  EXPECT_NEAR(std::stod(csv.rows[0][1]), std::sqrt(2.0 * std::numbers::e / 300.0), 1e-15);
}

TEST(CliScan, DefaultGridMinimaAgreeToThreeFigures) {
  const auto r = invoke({"scan", "--n", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Csv csv = parse_csv(r.out);
  ASSERT_EQ(csv.rows.size(), 200u);
  double unc = INFINITY;
  double ghz = INFINITY;
  double last_t = 0.0;
  for (const auto& row : csv.rows) {
    const double t = std::stod(row[0]);
    EXPECT_GT(t, last_t);
    last_t = t;
    unc = std::min(unc, std::stod(row[1]));
    ghz = std::min(ghz, std::stod(row[2]));
    // Round trip against the library at the optimal phase.
    const ExperimentBudget b{3, 100.0, t};
    EXPECT_NEAR(std::stod(row[1]), uncertainty_uncorrelated(b, std::numbers::pi / (2 * t), 1.0),
                1e-9 * std::stod(row[1]));
  }
  auto three_figures = [](double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
  };
  EXPECT_EQ(three_figures(unc), three_figures(ghz));
}

TEST(CliScan, SingularRowsAreFlagged) {
  const auto r = invoke({"scan", "--n", "2", "--detuning", "2", "--t-min", "1.5707963267948966",
                         "--t-max", "2", "--t-steps", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Csv csv = parse_csv(r.out);
  EXPECT_EQ(csv.rows[0][1], "nan");
  EXPECT_EQ(csv.rows[0][2], "nan");
  EXPECT_NE(r.err.find("warning: code=singular-point"), std::string::npos);
}

TEST(CliScan, ValidatesGrid) {
  EXPECT_EQ(invoke({"scan", "--n", "3", "--t-min", "0"}).code, kExitUsage);
  EXPECT_EQ(invoke({"scan", "--n", "3", "--t-min", "-1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"scan", "--n", "3", "--t-min", "2", "--t-max", "1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"scan", "--n", "3", "--t-spacing", "cubic"}).code, kExitUsage);
  EXPECT_EQ(invoke({"scan", "--n", "3", "--total-time", "0.1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"scan", "--n", "3", "--t-max", "200"}).code, kExitUsage);
  const auto log = invoke({"scan", "--n", "3", "--t-spacing", "log", "--t-steps", "3"});
  ASSERT_EQ(log.code, kExitOk);
  EXPECT_EQ(parse_csv(log.out).rows[1][0], format_double(std::sqrt(0.01 * 2.0)));
}

TEST(CliOptimize, BothMethodsOrderedAndNeverWorse) {
  const auto r = invoke({"optimize", "--n-min", "2", "--n-max", "5", "--method", "both", "--seed",
                         "42", "--restarts", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Csv csv = parse_csv(r.out);
  EXPECT_EQ(csv.header, (std::vector<std::string>{"n", "method", "improvement_pct", "t_opt",
                                                  "coeffs", "status"}));
  ASSERT_EQ(csv.rows.size(), 8u);
  for (std::size_t i = 0; i < 8; i += 2) {
    EXPECT_EQ(csv.rows[i][0], std::to_string(2 + i / 2));
    EXPECT_EQ(csv.rows[i][1], "gen-ramsey");
    EXPECT_EQ(csv.rows[i + 1][1], "qfi");
    EXPECT_EQ(csv.rows[i][5], "ok");
    EXPECT_GE(std::stod(csv.rows[i + 1][2]), std::stod(csv.rows[i][2]) - 1e-6);
  }
}

TEST(CliOptimize, RowsRoundTripThroughTheEvaluator) {
  const auto r = invoke({"optimize", "--n-min", "3", "--n-max", "4", "--restarts", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const auto& row : parse_csv(r.out).rows) {
    const int n = std::stoi(row[0]);
    const auto method = parse_method(row[1]);
    ASSERT_TRUE(method.has_value());
    const std::vector<double> a = parse_coeffs(row[4]);
    const auto e = evaluate_symmetric_coeffs(n, a, 1.0, 100.0, *method, {});
    EXPECT_NEAR(100.0 * (1.0 - e.ratio), std::stod(row[2]), 1e-9);
    EXPECT_NEAR(e.t_opt, std::stod(row[3]), 1e-9);
  }
}

TEST(CliOptimize, SeededRunsAreBytewiseIdentical) {
  TempDir dir;
  for (const char* format : {"csv", "json"}) {
    const auto a = dir / (std::string("a.") + format);
    const auto b = dir / (std::string("b.") + format);
    for (const auto& p : {a, b}) {
      ASSERT_EQ(invoke({"optimize", "--n-min", "2", "--n-max", "4", "--restarts", "1", "--seed",
                        "7", "--format", format, "--output", p.string()})
                    .code,
                kExitOk);
    }
    EXPECT_FALSE(slurp(a).empty());
    EXPECT_EQ(slurp(a), slurp(b));
  }
}

TEST(CliOptimize, JsonNestsRestartDetails) {
  const auto r = invoke({"optimize", "--n-min", "2", "--n-max", "2", "--method", "gen-ramsey",
                         "--restarts", "3", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  ASSERT_EQ(j["points"].size(), 1u);
  const auto& p = j["points"][0];
  EXPECT_EQ(p["method"], "gen-ramsey");
  EXPECT_EQ(p["restarts"].size(), 3u);
  EXPECT_GE(p["restart_spread_pct"].get<double>(), 0.0);
}

TEST(CliOptimize, Validation) {
  TempDir dir;
  const auto path = dir / "opt.csv";
  EXPECT_EQ(invoke({"optimize", "--n-min", "1", "--n-max", "3", "--output", path.string()}).code,
            kExitUsage);
  EXPECT_FALSE(fs::exists(path));
  EXPECT_EQ(invoke({"optimize", "--n-min", "2", "--n-max", "11"}).code, kExitUsage);
  EXPECT_EQ(invoke({"optimize", "--n-min", "3", "--n-max", "2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"optimize", "--n-min", "2", "--n-max", "2", "--method", "grid"}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"optimize", "--n-min", "2", "--n-max", "2", "--restarts", "0"}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"optimize", "--n-max", "2"}).code, kExitUsage);
}

TEST(CliQfi, GhzAndProductReachTheReferenceLimit) {
  const double expected = std::sqrt(2.0 * std::numbers::e / 400.0);
  for (const char* scheme : {"ghz", "uncorrelated"}) {
    const auto r = invoke({"qfi", "--scheme", scheme, "--n", "4", "--gamma", "1", "--optimize-t",
                           "--total-time", "100"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["min_uncertainty"].get<double>() / expected, 1.0, 1e-6) << scheme;
    EXPECT_NEAR(j["qfi_uncertainty"].get<double>() / expected, 1.0, 1e-6) << scheme;
    EXPECT_TRUE(j.contains("t_opt"));
    EXPECT_NEAR(j["classical_fi_sld"].get<double>() / j["qfi"].get<double>(), 1.0, 1e-6);
  }
}

TEST(CliQfi, NoiselessGhzInformation) {
  for (int n = 1; n <= 5; ++n) {
    const auto r = invoke({"qfi", "--scheme", "ghz", "--n", std::to_string(n), "--gamma", "0",
                           "--t", "0.6", "--detuning", "0.3"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NEAR(nlohmann::json::parse(r.out)["qfi"].get<double>(), n * n * 0.36, 1e-12);
  }
}

TEST(CliQfi, ExplicitCoefficients) {
  const auto r = invoke({"qfi", "--coeffs", "0.6;0.8", "--n", "3", "--gamma", "1", "--t", "0.4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["coeffs"].size(), 2u);
  EXPECT_GT(j["qfi"].get<double>(), 0.0);
  EXPECT_TRUE(j.contains("improvement_pct"));
}

TEST(CliQfi, ZeroInformationIsANumericalFailure) {
  TempDir dir;
  const auto path = dir / "q.json";
  const auto r = invoke({"qfi", "--coeffs", "0;1", "--n", "2", "--gamma", "1", "--t", "0.5",
                         "--output", path.string()});
  EXPECT_EQ(r.code, kExitNumerical);
  EXPECT_EQ(r.err.rfind("error: code=no-information", 0), 0u) << r.err;
  EXPECT_FALSE(fs::exists(path));
}

TEST(CliQfi, Validation) {
  EXPECT_EQ(invoke({"qfi", "--n", "2", "--t", "1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"qfi", "--scheme", "ghz", "--coeffs", "1;0", "--n", "2", "--t", "1"}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"qfi", "--scheme", "ghz", "--n", "2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"qfi", "--scheme", "ghz", "--n", "2", "--optimize-t", "--gamma", "0"}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"qfi", "--scheme", "ghz", "--n", "2", "--t", "1", "--format", "csv"}).code,
            kExitUsage);
  EXPECT_EQ(invoke({"qfi", "--coeffs", "1;1", "--n", "2", "--t", "1"}).code, kExitUsage);
}

TEST(CliConfig, FileValuesAreOverriddenByFlags) {
  TempDir dir;
  const auto cfg = dir / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# signal settings\nscheme = ghz\nn=3\n  t = 0.5\ndetuning=1.0 # inline comment\n";
  }
  const auto from_file = invoke({"signal", "--config", cfg.string()});
  ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
  auto row = parse_csv(from_file.out).rows.at(0);
  EXPECT_EQ(row[0], "0.5");
  EXPECT_EQ(row[3], "ghz");
  EXPECT_NEAR(std::stod(row[4]), signal_ghz(3, 1.0, 0.5, 0.0), 1e-15);

  const auto overridden = invoke({"signal", "--config", cfg.string(), "--t", "0.25"});
  ASSERT_EQ(overridden.code, kExitOk) << overridden.err;
  row = parse_csv(overridden.out).rows.at(0);
  EXPECT_EQ(row[0], "0.25");

  EXPECT_EQ(invoke({"signal", "--config", (dir / "missing.cfg").string()}).code, kExitUsage);
  {
    std::ofstream f(dir / "bad.cfg");
    f << "n 3\n";
  }
  EXPECT_EQ(invoke({"signal", "--config", (dir / "bad.cfg").string()}).code, kExitUsage);
}

TEST(CliGeneral, UnknownInputsAreUsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"fly"}).code, kExitUsage);
  EXPECT_EQ(invoke({"signal", "--n", "2", "--t", "1", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({"signal", "--n", "two", "--t", "1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"signal", "--n", "2", "--t", "1", "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(invoke({"signal", "--n", "2", "--t", "1", "--scheme", "symmetric-qfi"}).code,
            kExitUsage);
}

TEST(CliGeneral, HelpMentionsTheConvention) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("exp(-gamma*t)"), std::string::npos);
}

TEST(CliGeneral, OutputFileMatchesStdout) {
  TempDir dir;
  const auto path = dir / "s.csv";
  const std::vector<std::string> base{"signal", "--n", "2", "--t-min", "0", "--t-max", "1",
                                      "--t-steps", "5"};
  auto with_output = base;
  with_output.insert(with_output.end(), {"--output", path.string()});
  const auto to_file = invoke(with_output);
  ASSERT_EQ(to_file.code, kExitOk);
  EXPECT_TRUE(to_file.out.empty());
  EXPECT_EQ(slurp(path), invoke(base).out);
}

TEST(CliBinary, ExitStatusesOfTheExecutable) {
  auto status = [](const std::string& args) {
    const std::string cmd = std::string(CLOCKSIM_EXE) + " " + args + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("signal --n 2 --t 0.1"), 0);
  EXPECT_EQ(status("signal --t 0"), 2);
  EXPECT_EQ(status("qfi --coeffs '0;1' --n 2 --gamma 1 --t 0.5"), 3);
}

TEST(Output, NumberFormatting) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(NAN), "nan");
  EXPECT_EQ(format_double(INFINITY), "inf");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(join_coeffs(std::vector<double>{0.5, -0.25}), "0.5;-0.25");
  EXPECT_EQ(parse_coeffs("0.6,0.8"), (std::vector<double>{0.6, 0.8}));
  EXPECT_THROW(parse_coeffs("0.6;x"), Error);
  EXPECT_THROW(parse_coeffs(""), Error);
}

}  // namespace
}  // namespace clocksim::cli
