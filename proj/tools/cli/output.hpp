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

#include <string>
#include <string_view>
#include <vector>

namespace clocksim::cli {

/// Coherence-decay convention stated in every report header.
inline constexpr std::string_view kConventionNote =
    "single-ion coherence decays as exp(-gamma*t); only gamma*t, gamma*T and delta*t matter";

/// Shortest-form decimal with 17 significant digits, locale independent.
/// NaN prints as "nan".
std::string format_double(double value);

/// Comma-separated rows with LF line endings, preceded by a "# convention:"
/// comment line and a mandatory header row.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Semicolon-separated decimals, e.g. "0.5;0.5".
std::string join_coeffs(const std::vector<double>& coeffs);

/// Parses "a;b;c" (commas also accepted). Throws invalid-argument on bad input.
std::vector<double> parse_coeffs(std::string_view text);

}  // namespace clocksim::cli
