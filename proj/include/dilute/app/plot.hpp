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


// Static SVG figures from the CSV artifacts of a run directory.

#ifndef DILUTE_APP_PLOT_HPP
#define DILUTE_APP_PLOT_HPP

#include <string>
#include <vector>

namespace dilute::app {

struct PlotResult {
  std::vector<std::string> written;   // file names inside the directory
  std::vector<std::string> warnings;  // skipped inputs
};

// gaps.csv -> gap_vs_N.svg (log-log, power-law fits per parity),
// trajectory_N*.csv -> trajectory_N*.svg (ln(1 - overlap) with the fit of fit_N*.json),
// scan.csv -> scan_heatmap.svg. Unusable inputs are skipped with a warning.
PlotResult render_plots(const std::string& dir);

}  // namespace dilute::app

#endif  // DILUTE_APP_PLOT_HPP
