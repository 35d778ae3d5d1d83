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

// Spin matrices, tensor embeddings and coupled total-spin objects.
//
// Product basis conventions: local index k carries m = s - k, so index 0 is the
// highest weight. Site 1 is the most significant digit of a chain index. Sites
// are 1-based; on periodic chains site N+k wraps to k.

#ifndef DILUTE_SPIN_ALGEBRA_HPP
#define DILUTE_SPIN_ALGEBRA_HPP

#include <vector>

#include "dilute/types.hpp"

namespace dilute {

struct SpinMatrices {
  OperatorMatrix x, y, z;
  OperatorMatrix plus, minus;
};

SpinMatrices spin_matrices(HalfInteger s);
inline SpinMatrices spin_matrices(double s) { return spin_matrices(HalfInteger::from_double(s)); }

// 1-based site after the periodic wrap. Throws for out-of-range sites.
int wrap_site(int site, const ChainSpec& chain);

// Tensor-embeds local_op (dim d^|sites|, first listed site most significant)
// into the chain, acting as identity elsewhere.
OperatorMatrix embed(const OperatorMatrix& local_op, const std::vector<int>& sites, const ChainSpec& chain);

// Sites (link, link+1) after the wrap.
std::vector<int> link_sites(int link, const ChainSpec& chain);
// All links of the chain: 1..N on periodic chains (N >= 3), 1..N-1 otherwise.
std::vector<int> chain_links(const ChainSpec& chain);

struct TotalSpin {
  OperatorMatrix jz, jplus, jminus, j2;
};
// Collective spin operators of n coupled spins-s (open register of n sites).
TotalSpin total_spin_operators(int n_coupled, HalfInteger s);
// Multiplicity of total spin J among n coupled spins-s; zero if J is not admissible.
int spin_multiplicity(int n_coupled, HalfInteger s, HalfInteger j);
std::vector<HalfInteger> admissible_total_spins(int n_coupled, HalfInteger s);

OperatorMatrix total_spin_projector(int n_coupled, HalfInteger s, HalfInteger j);

// |J, mJ> of n coupled spins-s. For multiplicity > 1 the copies are ordered by the
// intermediate couplings of sites (1..2), then (1..3), and so on, smallest first.
StateVector coupled_basis_state(int n_coupled, HalfInteger s, HalfInteger j, HalfInteger mj, int copy = 0);

}  // namespace dilute

#endif  // DILUTE_SPIN_ALGEBRA_HPP
