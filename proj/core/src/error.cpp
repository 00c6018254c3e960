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

#include "clocksim/error.hpp"

namespace clocksim {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kSingularPoint:
      return "singular-point";
    case ErrorCode::kDegenerateState:
      return "degenerate-state";
    case ErrorCode::kNoInformation:
      return "no-information";
    case ErrorCode::kSingularOutcome:
      return "singular-outcome";
    case ErrorCode::kBracketing:
      return "bracketing";
    case ErrorCode::kOptimizationFailure:
      return "optimization-failure";
  }
  return "unknown";
}

void throw_invalid_argument(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

}  // namespace clocksim
