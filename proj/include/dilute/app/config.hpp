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


// Experiment configuration: one YAML document with nested tables, plus dotted
// key=value overrides from the command line.

#ifndef DILUTE_APP_CONFIG_HPP
#define DILUTE_APP_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "dilute/trajectories.hpp"

namespace dilute::app {

// Invalid configuration. The CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Task { gap, traject, steer, scan, regime };
const char* to_string(Task task);

struct DeltaHSpec {
  bool random = false;     // sampled from the kernelizer instead of the fixed link form
  std::vector<int> links;  // empty: (1,2) ... (N-1,N)
  double alpha = 1.0;
  std::uint64_t random_seed = 0;
  double norm = 1.0;
};

struct ModelSpec {
  std::string name = "aklt";  // aklt, mg or custom
  std::vector<int> n_sites{5};
  double gamma = 0.1;
  std::vector<int> cooled_links{1};
  std::optional<DeltaHSpec> delta_h;
  std::string target;  // aklt: aklt; mg: mg_minus; custom: ghz, w or product (all sites up)
  std::string boundary = "periodic";  // custom only
};

struct GapSpec {
  double bin_width = 0.5;
  bool liouvillian = true;  // full Liouvillian gap where the dimension allows it
  bool profile = true;      // per-N q-profile CSVs
};

struct TrajectorySpec {
  TrajectoryConfig config;
  int n_resamples = 500;  // 0 skips the bootstrap
  std::string initial = "haar";  // haar, or product: every site in its highest-weight state
  std::optional<std::pair<double, double>> fit_window;
  bool dump_raw = false;
};

struct ScanSpec {
  std::vector<double> alpha{0.0, 0.5, 1.0};
  std::vector<double> gamma{1e-3, 1e-2, 1e-1};
};

struct SteerSpec {
  std::vector<std::string> targets{"ghz", "w"};
  int link = 1;
  bool lie_closure = false;
  int max_generations = 64;
  int delta_h_samples = 0;  // random kernelizer samples checked with the Liouvillian
  double delta_h_norm = 1.0;
};

struct RegimeSpec {
  double L = 0.0, ell = 0.0, gamma = 0.0, D = 0.0;
};

struct ExperimentConfig {
  Task task = Task::gap;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  int threads = 0;
  ModelSpec model;
  GapSpec gap;
  TrajectorySpec trajectory;
  ScanSpec scan;
  SteerSpec steer;
  RegimeSpec regime;

  std::string canonical;  // normalized YAML of the merged document
  std::uint64_t hash = 0;  // FNV-1a of `canonical`
};

YAML::Node load_config_file(const std::string& path);
YAML::Node load_config_string(const std::string& text);
// "a.b.c=value"; the value is parsed as YAML, so "[3, 4, 5]" gives a sequence.
void apply_override(YAML::Node& root, const std::string& assignment);
// Validates the document and fills in defaults. Unknown keys are errors.
ExperimentConfig parse_config(const YAML::Node& root);

std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t value);

}  // namespace dilute::app

#endif  // DILUTE_APP_CONFIG_HPP
