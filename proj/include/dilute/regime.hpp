// Copyright 2026 The dilute authors
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


// Timescale regimes of a single sink of strength A = ell * gamma in a system of extent L.

#ifndef DILUTE_REGIME_HPP
#define DILUTE_REGIME_HPP

#include <optional>

namespace dilute {

enum class Regime { ballistic, diffusive_intermediate, diffusive_large };
const char* to_string(Regime regime);

struct RegimeEstimate {
  double L = 0.0;
  double ell = 0.0;
  double gamma = 0.0;
  double A = 0.0;
  double D = 0.0;
  Regime regime = Regime::ballistic;
  std::optional<double> t_A;  // L / A, diffusive regimes only
  std::optional<double> t_D;  // L^2 / D, diffusive regimes only
  // Within a factor of 3 of a regime boundary.
  bool crossover = false;
};

inline constexpr double kCrossoverFactor = 3.0;

// L < ell: ballistic. ell <= L < D/A: intermediate. L >= D/A: large.
RegimeEstimate regime_classify(double L, double ell, double gamma, double D);

}  // namespace dilute

#endif  // DILUTE_REGIME_HPP
