// Copyright 2026 The tetronsim Authors
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

// Fast regression expectations across modules (trivial corners and pinned
// values). Runs in a few seconds; the long scans live in the acceptance test.

#ifndef TETRON_REGRESSION_HPP_
#define TETRON_REGRESSION_HPP_

#include <string>
#include <vector>

namespace tetron {

struct RegressionCheck {
  std::string module;
  std::string name;
  double value = 0;
  double expected = 0;
  double tolerance = 0;
  bool passed = false;
};

std::vector<RegressionCheck> regression_checks();

const char* library_version();

}  // namespace tetron

#endif  // TETRON_REGRESSION_HPP_
