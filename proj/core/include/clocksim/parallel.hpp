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

#include <cstddef>
#include <functional>

namespace clocksim {

/// Number of worker threads used for sweeps and optimizer restarts.
///
/// Reads the CLOCKSIM_THREADS environment variable: a positive value caps
/// the pool, 0 or unset means std::thread::hardware_concurrency().
std::size_t worker_count();

/// Runs body(i) for every i in [0, count). Tasks are claimed dynamically by
/// up to worker_count() threads; callers write results into slot i so the
/// output never depends on scheduling. The first exception thrown by any
/// task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace clocksim
