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


#include <gtest/gtest.h>

#include <cmath>

#include "dilute/rng.hpp"
#include "dilute/statistics.hpp"

namespace dilute {
namespace {

TEST(Rng, SeedChainIsStableAndSensitive) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {2}), derive_seed(2, {2}));
  // splitmix64 reference output for state 0 after one increment.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Rng, UniformAndNormalMoments) {
  RandomStream rng(123);
  const int n = 200000;
  double s = 0, s2 = 0, g = 0, g2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
    const double z = rng.normal();
    g += z;
    g2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.5, 0.005);
  EXPECT_NEAR(s2 / n - 0.25, 1.0 / 12.0, 0.003);
  EXPECT_NEAR(g / n, 0.0, 0.01);
  EXPECT_NEAR(g2 / n, 1.0, 0.01);
}

TEST(Rng, BelowIsInRange) {
  RandomStream rng(5);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.below(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Rng, HaarStatesAreNormalized) {
  RandomStream rng(6);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(haar_state(27, rng).norm(), 1.0, 1e-12);
}

TEST(Bootstrap, ConstantSamplesHaveZeroSpread) {
  RealMatrix x = RealMatrix::Constant(50, 4, 0.25);
  BootstrapResult b = bootstrap_mean(x, 100, 1);
  for (double s : b.std) EXPECT_NEAR(s, 0.0, 1e-15);
  for (double m : b.mean) EXPECT_NEAR(m, 0.25, 1e-15);
}

TEST(Bootstrap, StdMatchesStandardError) {
  // For iid samples the bootstrap spread of the mean approaches sigma / sqrt(n).
  RandomStream rng(9);
  const int n = 400;
  RealMatrix x(n, 1);
  for (int i = 0; i < n; ++i) x(i, 0) = rng.normal();
  const double mean = x.mean();
  const double sd = std::sqrt((x.array() - mean).square().sum() / (n - 1));
  BootstrapResult b = bootstrap_mean(x, 2000, 10);
  EXPECT_NEAR(b.std[0], sd / std::sqrt(n), 0.1 * sd / std::sqrt(n));
  EXPECT_NEAR(b.sample_mean[0], mean, 1e-14);
}

TEST(Bootstrap, Deterministic) {
  RandomStream rng(11);
  RealMatrix x(30, 3);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform();
  BootstrapResult a = bootstrap_mean(x, 50, 4), b = bootstrap_mean(x, 50, 4);
  EXPECT_EQ(a.resample_means, b.resample_means);
  EXPECT_THROW(bootstrap_mean(x, 1, 4), Error);
}

TEST(Fit, RecoversExponentialRate) {
  std::vector<double> grid, overlap;
  for (int k = 0; k <= 50; ++k) {
    grid.push_back(0.2 * k);
    overlap.push_back(1.0 - 0.8 * std::exp(-0.37 * grid.back()));
  }
  FitResult f = fit_gap(overlap, grid, default_fit_window(grid));
  EXPECT_NEAR(f.gap(), 0.37, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(0.8), 1e-12);
  EXPECT_TRUE(f.curvature_ok);
  EXPECT_DOUBLE_EQ(f.fit_window.first, 4.0);
}

TEST(Fit, FlagsCurvature) {
  std::vector<double> grid, overlap;
  for (int k = 0; k <= 50; ++k) {
    grid.push_back(0.2 * k);
    const double t = grid.back();
    overlap.push_back(1.0 - 0.5 * std::exp(-0.2 * t) - 0.5 * std::exp(-2.0 * t));
  }
  FitResult f = fit_gap(overlap, grid, {0.0, 10.0});
  EXPECT_FALSE(f.curvature_ok);
}

TEST(Fit, TooFewPoints) {
  EXPECT_THROW(fit_gap(std::vector<double>{0.1, 0.2}, std::vector<double>{0.0, 1.0}, {0.0, 1.0}), Error);
}

TEST(PowerLaw, ExactSeries) {
  std::vector<std::pair<double, double>> pts;
  for (int n : {5, 6, 7, 8, 9}) pts.emplace_back(n, 0.3 * std::pow(n, -2.5));
  PowerLawFit f = power_law_fit(pts);
  EXPECT_NEAR(f.alpha, 2.5, 1e-12);
  EXPECT_NEAR(f.m, 0.3, 1e-12);
  ParityFits p = power_law_fit_by_parity(pts);
  ASSERT_TRUE(p.even && p.odd);
  EXPECT_EQ(p.even->n_points, 2);
  EXPECT_EQ(p.odd->n_points, 3);
  EXPECT_NEAR(p.odd->alpha, 2.5, 1e-12);
  EXPECT_FALSE(power_law_fit_by_parity({{4, 0.1}, {5, 0.05}}).even);
}

}  // namespace
}  // namespace dilute
