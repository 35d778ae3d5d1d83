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


// Dimension of the Lie algebra generated by the kernelizer on the complement of the target.

#ifndef DILUTE_LIE_CLOSURE_HPP
#define DILUTE_LIE_CLOSURE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dilute/steerability.hpp"
#include "dilute/types.hpp"

namespace dilute {

struct LieClosureOptions {
  int max_generations = 64;
  double threshold = 1e-10;  // Hilbert-Schmidt norm of a new direction after projection
  std::optional<std::uint64_t> shuffle_seed;  // permute the generator order
  int n_threads = 1;
};

struct LieClosureReport {
  Index dimension = 0;         // traceless part; the identity on the block is not counted
  Index target_dimension = 0;  // n^2 - 1 on an n-dimensional block
  Index block_dim = 0;
  bool converged = false;
  int generations = 0;

  bool full_rank() const { return dimension == target_dimension; }
};

inline constexpr Index kMaxClosureBlock = 81;

// Closure of the kernelizer compressed to the orthogonal complement of its target.
LieClosureReport lie_closure_dimension(const KernelizerBasis& kernelizer, const LieClosureOptions& options = {});
// Closure of explicit Hermitian generators on their own space.
LieClosureReport lie_closure_dimension(const std::vector<DenseMatrix>& generators, const LieClosureOptions& options = {});

}  // namespace dilute

#endif  // DILUTE_LIE_CLOSURE_HPP
