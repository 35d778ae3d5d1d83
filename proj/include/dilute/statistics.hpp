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


// Bootstrap statistics over trajectory ensembles and exponential / power-law fits.

#ifndef DILUTE_STATISTICS_HPP
#define DILUTE_STATISTICS_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dilute/trajectories.hpp"
#include "dilute/types.hpp"

namespace dilute {

inline constexpr double kOverlapFloor = 1e-14;
inline constexpr int kDefaultResamples = 500;

struct BootstrapResult {
  std::vector<double> mean;       // per time, mean over resamples
  std::vector<double> std;        // per time, standard deviation over resamples
  std::vector<double> sample_mean;  // per time, plain ensemble mean
  RealMatrix resample_means;      // n_resamples x n_times
};

// Resamples trajectories with replacement. Deterministic in `seed`.
BootstrapResult bootstrap_mean(const TrajectoryEnsemble& ensemble, int n_resamples = kDefaultResamples,
                               std::uint64_t seed = 0);
BootstrapResult bootstrap_mean(const RealMatrix& samples, int n_resamples, std::uint64_t seed);

struct FitResult {
  double slope = 0.0;      // of ln(1 - overlap) versus t, i.e. minus the gap
  double intercept = 0.0;
  double slope_std = 0.0;  // bootstrap, zero without resamples
  std::pair<double, double> fit_window{0.0, 0.0};
  int n_points = 0;
  // |change of the local slope across the window| / |slope| from a quadratic fit.
  double curvature = 0.0;
  bool curvature_ok = true;

  double gap() const { return -slope; }
};

inline constexpr double kFitWindowFraction = 0.6;
inline constexpr double kMaxCurvature = 0.05;

// Last 60% of the grid.
std::pair<double, double> default_fit_window(const std::vector<double>& time_grid);

// Least squares line through ln(max(1 - overlap, floor)) on t_lo <= t <= t_hi.
FitResult fit_gap(const std::vector<double>& mean_overlap, const std::vector<double>& time_grid,
                  std::pair<double, double> window);
// Same fit on the bootstrap mean, with slope_std from refitting every resample.
FitResult fit_gap(const BootstrapResult& boot, const std::vector<double>& time_grid,
                  std::optional<std::pair<double, double>> window = std::nullopt);

struct PowerLawFit {
  double m = 0.0;
  double alpha = 0.0;  // gap = m * N^-alpha
  int n_points = 0;
};

PowerLawFit power_law_fit(const std::vector<std::pair<double, double>>& gaps);

struct ParityFits {
  std::optional<PowerLawFit> even;
  std::optional<PowerLawFit> odd;
};
// Separate fits over even and odd N; a series with fewer than two points is left empty.
ParityFits power_law_fit_by_parity(const std::vector<std::pair<double, double>>& gaps);

}  // namespace dilute

#endif  // DILUTE_STATISTICS_HPP
