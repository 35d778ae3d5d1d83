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


#include "dilute/regime.hpp"

#include <cmath>
#include <string>

#include "dilute/error.hpp"

namespace dilute {

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::ballistic: return "ballistic";
    case Regime::diffusive_intermediate: return "diffusive_intermediate";
    case Regime::diffusive_large: return "diffusive_large";
  }
  return "unknown";
}

namespace {

bool near(double a, double b) {
  const double r = a / b;
  return r >= 1.0 / kCrossoverFactor && r <= kCrossoverFactor;
}

}  // namespace

RegimeEstimate regime_classify(double L, double ell, double gamma, double D) {
  for (double x : {L, ell, gamma, D})
    require(x > 0.0 && std::isfinite(x), ErrorKind::invalid_argument, "regime inputs must be positive");
  RegimeEstimate out;
  out.L = L;
  out.ell = ell;
  out.gamma = gamma;
  out.A = ell * gamma;
  out.D = D;
  const double sink_length = D / out.A;
  if (L < ell) {
    out.regime = Regime::ballistic;
    out.crossover = near(L, ell);
    return out;
  }
  out.t_A = L / out.A;
  out.t_D = L * L / D;
  out.regime = L < sink_length ? Regime::diffusive_intermediate : Regime::diffusive_large;
  out.crossover = near(L, ell) || near(L, sink_length);
  return out;
}

}  // namespace dilute
