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

// AKLT and Majumdar-Ghosh chains, their single-link jump sets and target states.

#ifndef DILUTE_MODELS_HPP
#define DILUTE_MODELS_HPP

#include <string>
#include <utility>
#include <vector>

#include "dilute/types.hpp"

namespace dilute {

struct LindbladModel {
  ChainSpec chain;
  OperatorMatrix hamiltonian;
  std::vector<OperatorMatrix> jumps;
  double gamma = 0.0;

  Index dim() const { return hamiltonian.dim(); }
  // Hermitian Hamiltonian, matching dimensions, gamma >= 0.
  void validate() const;
};

struct TargetState {
  StateVector vector;
  std::string label;
  double energy = 0.0;

  // Throws invalid-target unless H|psi> = energy |psi> within tol.
  void check_eigenvector(const OperatorMatrix& hamiltonian, double tol = 1e-9) const;
};

ChainSpec aklt_chain(int n_sites);
ChainSpec mg_chain(int n_sites);
ChainSpec qubit_chain(int n_sites, Boundary boundary = Boundary::periodic);

LindbladModel build_aklt(const ChainSpec& chain);
TargetState aklt_ground_state(const ChainSpec& chain);
// L1..L5: |1,1><2,2|, |1,1><2,1|, |1,0><2,0|, |1,-1><2,-1|, |1,-1><2,-2| on (link, link+1).
std::vector<OperatorMatrix> aklt_jumps(int link, const ChainSpec& chain);

LindbladModel build_mg(const ChainSpec& chain);
// Singlets on (1,2),(3,4),... and on (2,3),(4,5),...,(N,1).
std::pair<TargetState, TargetState> mg_ground_states(const ChainSpec& chain);
// |0,0><1,1|, |0,0><1,-1|, |0,0><1,0| on (link, link+1).
std::vector<OperatorMatrix> mg_jumps(int link, const ChainSpec& chain);

// alpha * sum over links of sum_m |2,m><2,m+1| + h.c.
OperatorMatrix aklt_delta_h(const std::vector<int>& links, double alpha, const ChainSpec& chain);
// Links (1,2) ... (N-1,N).
std::vector<int> default_delta_h_links(const ChainSpec& chain);

TargetState ghz_state(int n);
TargetState w_state(int n);

// |cold><hot| on the link, embedded. Both vectors live on the d^2-dimensional link space.
OperatorMatrix link_transition(const StateVector& cold, const StateVector& hot, int link, const ChainSpec& chain);
// One jump per (cold, hot) pair.
std::vector<OperatorMatrix> hot_to_cold_jumps(const std::vector<std::pair<StateVector, StateVector>>& map,
                                              int link, const ChainSpec& chain);

OperatorMatrix sum_jump_squares(const std::vector<OperatorMatrix>& jumps, Index dim);

}  // namespace dilute

#endif  // DILUTE_MODELS_HPP
