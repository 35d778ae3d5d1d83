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


// Quantum-jump unraveling of the master equation.
//
// Between jumps the state follows H_eff = H - (i gamma/2) sum L^dag L. A jump
// fires when the squared norm falls below a uniform threshold drawn after the
// previous jump; channel j is picked with weight ||L_j psi||^2. The recorded
// observable is |<target|psi>|^2 of the normalized state, whose ensemble mean
// is Tr(rho(t) rho_target).

#ifndef DILUTE_TRAJECTORIES_HPP
#define DILUTE_TRAJECTORIES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dilute/models.hpp"
#include "dilute/types.hpp"

namespace dilute {

enum class Integrator {
  automatic,    // spectral when every block of H_eff has a well conditioned eigenbasis
  spectral,     // exact propagation in the eigenbasis of H_eff, block by block
  runge_kutta,  // adaptive Dormand-Prince 5(4)
};
const char* to_string(Integrator integrator);

struct TrajectoryConfig {
  int n_trajectories = 1000;
  double t_max = 10.0;
  double dt_record = 0.1;
  std::uint64_t seed = 0;
  double integrator_tolerance = 1e-8;
  Integrator integrator = Integrator::automatic;
  int n_threads = 0;  // 0 picks the hardware concurrency
  double min_step = 1e-12;
  long max_jumps = 10'000'000;  // per trajectory

  void validate() const;
};

struct TrajectoryEnsemble {
  std::vector<double> time_grid;
  RealMatrix overlaps;  // n_trajectories x n_times
  std::vector<std::uint64_t> seeds_used;
  std::vector<long> jump_counts;
  Integrator integrator_used = Integrator::automatic;

  Index n_trajectories() const { return overlaps.rows(); }
  Index n_times() const { return overlaps.cols(); }
};

// t_k = k * dt_record for k = 0 .. floor(t_max / dt_record).
std::vector<double> record_grid(double t_max, double dt_record);

// Without an initial state every trajectory starts from its own Haar-random state.
TrajectoryEnsemble run_ensemble(const LindbladModel& model, const TargetState& target,
                                const std::optional<StateVector>& initial, const TrajectoryConfig& config);

}  // namespace dilute

#endif  // DILUTE_TRAJECTORIES_HPP
