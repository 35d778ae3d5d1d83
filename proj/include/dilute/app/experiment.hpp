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


// Task runners behind the command-line tool.
//
// Seeds: every random draw derives from the master seed through derive_seed:
//   trajectories of size N     derive_seed(seed, {1, N})
//   bootstrap of size N        derive_seed(seed, {2, N})
//   flow check                 derive_seed(seed, {3, target index, N})
//   steer delta-H sample i     derive_seed(seed, {4, target index, N, i})
//   model.delta_h random form  derive_seed(seed, {5, random_seed, N})

#ifndef DILUTE_APP_EXPERIMENT_HPP
#define DILUTE_APP_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dilute/app/config.hpp"
#include "dilute/models.hpp"
#include "dilute/steerability.hpp"

namespace dilute::app {

enum SeedTag : std::uint64_t {
  kTagTrajectory = 1,
  kTagBootstrap = 2,
  kTagFlow = 3,
  kTagSteerDeltaH = 4,
  kTagModelDeltaH = 5,
};

struct BuiltModel {
  LindbladModel model;
  TargetState target;
  std::vector<JumpValidity> validity;  // per cooled link
  std::vector<std::string> warnings;
};

// Hamiltonian, jumps on every cooled link, delta H and target for one chain size.
BuiltModel build_model(const ModelSpec& spec, int n_sites, std::uint64_t master_seed);

struct GapRow {
  int n_sites = 0;
  std::optional<double> gap;
  double gap_estimate = 0.0;
  double Q = 0.0;
  int steady_state_count = 0;
  std::string method;
  bool weak_coupling_valid = true;
  bool jumps_valid = true;
};

// Gap and perturbative estimate for one size. The exact gap comes from the full
// Liouvillian up to dimension 729, from the effective Hamiltonian up to 2187 and
// is left empty beyond.
GapRow gap_row(const ExperimentConfig& config, int n_sites, std::vector<std::string>& warnings);

struct ScanCell {
  double alpha = 0.0;
  double gamma = 0.0;
  double gap = 0.0;
  double gap_estimate = 0.0;
  int steady_state_count = 0;
  // |gap - estimate| / estimate; empty when the estimate vanishes.
  std::optional<double> relative_deviation;
  bool agreement = false;  // relative_deviation <= kScanAgreement
  bool bound_holds = true; // gap <= estimate + 1e-9
};

inline constexpr double kScanAgreement = 0.1;

// AKLT with delta H of strength alpha on the configured links, one cell per
// (alpha, gamma), evaluated on `threads` workers. Cells are in row-major (alpha, gamma) order.
std::vector<ScanCell> scan_gap_vs_alpha_gamma(const ModelSpec& base, int n_sites, const std::vector<double>& alphas,
                                              const std::vector<double>& gammas, int threads);

struct SteerRow {
  std::string target;
  int n_sites = 0;
  int link = 0;
  Index hot_dim = 0;
  Index cold_dim = 0;
  std::vector<Index> kernelizer_dim_per_link;
  Index kernelizer_dim = 0;
  bool necessary_hot = false;
  bool necessary_flow = false;
  std::vector<StateVector> witnesses;
  std::optional<Index> lie_dim;
  Index lie_target = 0;
  bool lie_converged = false;
  int delta_h_samples = 0;
  int delta_h_unique = 0;  // samples with a unique steady state
  std::vector<std::string> notes;
};

SteerRow steer_row(const ExperimentConfig& config, const std::string& target, std::size_t target_index, int n_sites);

struct RunResult {
  std::vector<std::string> artifacts;  // paths relative to the output directory
  std::vector<std::string> warnings;
};

// Runs config.task and writes the artifacts plus config.yaml into config.output_dir.
RunResult run_experiment(const ExperimentConfig& config);

}  // namespace dilute::app

#endif  // DILUTE_APP_EXPERIMENT_HPP
