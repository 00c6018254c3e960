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

#include <stdexcept>
#include <string>
#include <string_view>

namespace clocksim {

// Failure categories. Argument errors map to CLI exit code 2, everything
// else is a numerical failure (exit code 3).
enum class ErrorCode {
  kInvalidArgument,
  kSingularPoint,        // zero signal slope, e.g. sin(delta * t) == 0
  kDegenerateState,      // zero <S_x> or zero <dS_y^2> where a signal is required
  kNoInformation,        // Fisher information is zero
  kSingularOutcome,      // p_m == 0 while dp_m/d(delta) != 0
  kBracketing,           // scalar minimizer found no finite point
  kOptimizationFailure,  // every restart failed
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  bool is_argument_error() const noexcept {
    return code_ == ErrorCode::kInvalidArgument;
  }

 private:
  ErrorCode code_;
};

[[noreturn]] void throw_invalid_argument(const std::string& message);

}  // namespace clocksim
