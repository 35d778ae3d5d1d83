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


#include "dilute/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "dilute/rng.hpp"

namespace dilute {

BootstrapResult bootstrap_mean(const TrajectoryEnsemble& ensemble, int n_resamples, std::uint64_t seed) {
  return bootstrap_mean(ensemble.overlaps, n_resamples, seed);
}

BootstrapResult bootstrap_mean(const RealMatrix& samples, int n_resamples, std::uint64_t seed) {
  require(n_resamples >= 2, ErrorKind::invalid_argument, "bootstrap needs at least two resamples");
  require(samples.rows() >= 1, ErrorKind::insufficient_data, "empty ensemble");
  const Index n = samples.rows();
  const Index t = samples.cols();
  BootstrapResult out;
  out.resample_means.resize(n_resamples, t);
  RandomStream rng(derive_seed(seed, {0xb0075u}));
  RealVector counts(n);
  for (int r = 0; r < n_resamples; ++r) {
    counts.setZero();
    for (Index k = 0; k < n; ++k) counts(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)))) += 1.0;
    out.resample_means.row(r) = (counts.transpose() * samples) / static_cast<double>(n);
  }
  RealVector mean = out.resample_means.colwise().mean().transpose();
  RealVector sample_mean = samples.colwise().mean().transpose();
  out.mean.assign(mean.data(), mean.data() + t);
  out.sample_mean.assign(sample_mean.data(), sample_mean.data() + t);
  out.std.resize(static_cast<size_t>(t));
  for (Index j = 0; j < t; ++j) {
    double var = (out.resample_means.col(j).array() - mean(j)).square().sum() / (n_resamples - 1);
    out.std[static_cast<size_t>(j)] = std::sqrt(var);
  }
  return out;
}

std::pair<double, double> default_fit_window(const std::vector<double>& time_grid) {
  require(!time_grid.empty(), ErrorKind::insufficient_data, "empty time grid");
  const double t0 = time_grid.front();
  const double t1 = time_grid.back();
  return {t1 - kFitWindowFraction * (t1 - t0), t1};
}

namespace {

std::vector<size_t> window_indices(const std::vector<double>& grid, std::pair<double, double> w) {
  std::vector<size_t> idx;
  const double eps = 1e-12 * std::max(1.0, std::abs(w.second));
  for (size_t i = 0; i < grid.size(); ++i)
    if (grid[i] >= w.first - eps && grid[i] <= w.second + eps) idx.push_back(i);
  return idx;
}

double log_excess(double overlap) { return std::log(std::max(1.0 - overlap, kOverlapFloor)); }

// Polynomial least squares in a centred variable; coefficients low order first.
RealVector poly_fit(const RealVector& x, const RealVector& y, int degree) {
  RealMatrix a(x.size(), degree + 1);
  for (Index i = 0; i < x.size(); ++i) {
    double p = 1.0;
    for (int k = 0; k <= degree; ++k, p *= x(i)) a(i, k) = p;
  }
  return a.colPivHouseholderQr().solve(y);
}

FitResult fit_line(const std::vector<double>& overlap, const std::vector<double>& grid,
                   const std::vector<size_t>& idx, std::pair<double, double> window) {
  const Index n = static_cast<Index>(idx.size());
  RealVector x(n), y(n);
  for (Index i = 0; i < n; ++i) {
    x(i) = grid[idx[static_cast<size_t>(i)]];
    y(i) = log_excess(overlap[idx[static_cast<size_t>(i)]]);
  }
  const double xc = x.mean();
  RealVector line = poly_fit(x.array() - xc, y, 1);
  FitResult out;
  out.slope = line(1);
  out.intercept = line(0) - line(1) * xc;
  out.fit_window = window;
  out.n_points = static_cast<int>(n);
  if (n >= 4) {
    RealVector quad = poly_fit(x.array() - xc, y, 2);
    const double span = x.maxCoeff() - x.minCoeff();
    out.curvature = std::abs(2.0 * quad(2) * span) / std::max(std::abs(out.slope), 1e-300);
    out.curvature_ok = out.curvature <= kMaxCurvature;
  }
  return out;
}

}  // namespace

FitResult fit_gap(const std::vector<double>& mean_overlap, const std::vector<double>& time_grid,
                  std::pair<double, double> window) {
  require(mean_overlap.size() == time_grid.size(), ErrorKind::invalid_argument, "overlap and grid lengths differ");
  require(window.first <= window.second, ErrorKind::invalid_argument, "empty fit window");
  auto idx = window_indices(time_grid, window);
  require(idx.size() >= 3, ErrorKind::insufficient_data, "fewer than 3 points in the fit window");
  return fit_line(mean_overlap, time_grid, idx, window);
}

FitResult fit_gap(const BootstrapResult& boot, const std::vector<double>& time_grid,
                  std::optional<std::pair<double, double>> window) {
  const auto w = window ? *window : default_fit_window(time_grid);
  FitResult out = fit_gap(boot.sample_mean, time_grid, w);
  auto idx = window_indices(time_grid, w);
  const Index nr = boot.resample_means.rows();
  if (nr >= 2) {
    RealVector slopes(nr);
    std::vector<double> row(time_grid.size());
    for (Index r = 0; r < nr; ++r) {
      for (size_t j = 0; j < row.size(); ++j) row[j] = boot.resample_means(r, static_cast<Index>(j));
      slopes(r) = fit_line(row, time_grid, idx, w).slope;
    }
    out.slope_std = std::sqrt((slopes.array() - slopes.mean()).square().sum() / (nr - 1));
  }
  return out;
}

PowerLawFit power_law_fit(const std::vector<std::pair<double, double>>& gaps) {
  require(gaps.size() >= 2, ErrorKind::insufficient_data, "power-law fit needs at least two points");
  const Index n = static_cast<Index>(gaps.size());
  RealVector x(n), y(n);
  for (Index i = 0; i < n; ++i) {
    const auto [size, gap] = gaps[static_cast<size_t>(i)];
    require(size > 0.0, ErrorKind::invalid_data, "system size must be positive");
    require(gap > 0.0 && std::isfinite(gap), ErrorKind::invalid_data, "gaps must be positive");
    x(i) = std::log(size);
    y(i) = std::log(gap);
  }
  require(x.maxCoeff() > x.minCoeff(), ErrorKind::insufficient_data, "power-law fit needs two distinct sizes");
  RealVector c = poly_fit(x, y, 1);
  return PowerLawFit{std::exp(c(0)), -c(1), static_cast<int>(n)};
}

ParityFits power_law_fit_by_parity(const std::vector<std::pair<double, double>>& gaps) {
  std::vector<std::pair<double, double>> even, odd;
  for (const auto& p : gaps) (static_cast<long>(std::llround(p.first)) % 2 == 0 ? even : odd).push_back(p);
  ParityFits out;
  if (even.size() >= 2) out.even = power_law_fit(even);
  if (odd.size() >= 2) out.odd = power_law_fit(odd);
  return out;
}

}  // namespace dilute
