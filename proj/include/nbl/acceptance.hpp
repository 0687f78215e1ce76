// Copyright 2026 The nbl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nbl {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 7;
  unsigned threads = 0;
};

/// Golden octahedron-box certificate (k = 1, resolution 10^4).
inline constexpr double kOctahedronGoldenGap = 0.10355339059327373;
inline constexpr double kOctahedronGoldenPStar = 0.5;

/// Runs the ten acceptance criteria in order. `on_result` is called as each finishes.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options = {},
    const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace nbl
