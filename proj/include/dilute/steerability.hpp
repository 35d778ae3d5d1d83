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


// Reachability checks for a target state: jump-set validity, the hot-subspace and
// flow conditions, the kernelizer and random kernelizer sampling.

#ifndef DILUTE_STEERABILITY_HPP
#define DILUTE_STEERABILITY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dilute/models.hpp"
#include "dilute/types.hpp"

namespace dilute {

struct JumpValidity {
  bool supported_on_link = false;
  bool nilpotent = false;
  bool kernel_matches_cold = false;
  bool image_in_cold = false;
  double support_residual = 0.0;    // max |L - embed(l)| over jumps
  double nilpotency_residual = 0.0; // max over j of max |l_j^2|
  double kernel_residual = 0.0;     // 1 - min principal cosine, or 1 on a dimension mismatch
  double image_residual = 0.0;      // max over j of max |P_hot l_j|
  Index kernel_dim = 0;
  Index cold_dim = 0;

  bool valid() const { return supported_on_link && nilpotent && kernel_matches_cold && image_in_cold; }
};

inline constexpr double kJumpResidualTolerance = 1e-10;
inline constexpr double kAngleTolerance = 1e-8;

// Chain-embedded jumps on (link, link+1) against the hot/cold split of the target.
JumpValidity validate_jumps(const std::vector<OperatorMatrix>& jumps, const TargetState& target, int link,
                            const ChainSpec& chain);

// Link operator l with L = embed(l, link) for an operator supported on the link.
DenseMatrix restrict_to_link(const OperatorMatrix& op, int link, const ChainSpec& chain);

// True iff the reduced link state is rank deficient, i.e. the hot subspace is not empty.
bool necessary_condition_hot(const TargetState& target, int link, const ChainSpec& chain);

// L_j = |c_(j mod n_cold)><h_j| over an orthonormal hot basis {h_j} and cold basis {c_k}.
std::vector<OperatorMatrix> cooling_jumps(const TargetState& target, int link, const ChainSpec& chain);

// Orthonormal Hermitian basis of d x d matrices under the Hilbert-Schmidt product.
// The first element is 1/sqrt(d); the rest are generalized Gell-Mann matrices / sqrt(2).
std::vector<DenseMatrix> hermitian_operator_basis(int d);

struct KernelizerBasis {
  ChainSpec chain;
  StateVector target;
  // Local generators of every link, link by link, then the cross-link completion.
  // Each group is orthonormal under the Hilbert-Schmidt product on the full chain.
  std::vector<OperatorMatrix> generators;
  std::vector<int> generator_link;  // link of a local generator, 0 for the completion
  std::vector<int> links;           // links in the order they were processed
  std::vector<Index> local_dims;    // per entry of `links`
  Index dimension = 0;              // real dimension of the whole space, identity excluded
  bool includes_identity = true;

  Index size() const { return static_cast<Index>(generators.size()); }
  std::vector<OperatorMatrix> local_generators(int link) const;
};

inline constexpr Index kMaxKernelizerDim = 4096;

struct KernelizerOptions {
  // Add the operators that annihilate the target only as sums over several links.
  bool cross_link = true;
  double rel_cutoff = 1e-10;
};

KernelizerBasis build_kernelizer(const TargetState& target, const ChainSpec& chain,
                                 const KernelizerOptions& options = {});

struct FlowCheck {
  bool passes = true;
  std::vector<StateVector> witnesses;
  int common_eigenspaces = 0;
  std::vector<std::string> warnings;
};

inline constexpr double kEigenResidualTolerance = 1e-8;

// Looks for common eigenvectors of all generators outside span{target} + hot space of the link.
FlowCheck necessary_condition_flow(const KernelizerBasis& kernelizer, const TargetState& target, int link,
                                   std::uint64_t seed = 0);

// Gaussian combination of the generators with Hilbert-Schmidt norm `norm`.
OperatorMatrix sample_delta_h(const KernelizerBasis& kernelizer, std::uint64_t seed, double norm);

}  // namespace dilute

#endif  // DILUTE_STEERABILITY_HPP
