// Copyright 2026 The xhbac Authors
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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace xhbac {

/// Mixed relative/absolute comparison tolerance.
///
/// Two quantities are considered equal when they differ by less than
/// max(absolute, relative * |scale|).
struct Tolerance {
  double relative = 1e-9;
  double absolute = 1e-12;

  double slack(double scale) const {
    return std::max(absolute, relative * std::abs(scale));
  }

  /// a <= b, allowing for the slack at b's scale.
  bool leq(double a, double b) const { return a <= b + slack(b); }

  bool equal(double a, double b) const {
    return std::abs(a - b) <= slack(std::max(std::abs(a), std::abs(b)));
  }
};

/// Environment variable that overrides the default relative tolerance.
inline constexpr const char* kToleranceEnv = "XHBAC_TOL";

/// Default tolerance, honouring XHBAC_TOL when it parses as a positive real.
inline Tolerance default_tolerance() {
  Tolerance tol;
  if (const char* env = std::getenv(kToleranceEnv); env != nullptr) {
    try {
      std::size_t used = 0;
      const double value = std::stod(env, &used);
      if (used == std::string(env).size() && value > 0.0 && std::isfinite(value)) {
        tol.relative = value;
      }
    } catch (const std::exception&) {
      // Malformed override: keep the built-in default.
    }
  }
  return tol;
}

}  // namespace xhbac
