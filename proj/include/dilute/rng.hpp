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


// Seeded random streams. Per-task seeds come from a splitmix64 hash chain so
// results do not depend on scheduling. Uniform and normal draws are computed
// here rather than with <random> distributions, whose output is not specified
// by the standard and differs between library implementations.

#ifndef DILUTE_RNG_HPP
#define DILUTE_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include "dilute/types.hpp"

namespace dilute {

std::uint64_t splitmix64(std::uint64_t x);
// Hash chain: seed -> splitmix64(seed ^ splitmix64(tag_1)) -> ... for each tag.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }
  double normal();
  cplx complex_normal();  // unit variance per component
  std::uint64_t bits() { return engine_(); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Haar-random normalized state.
StateVector haar_state(Index dim, RandomStream& rng);

}  // namespace dilute

#endif  // DILUTE_RNG_HPP
