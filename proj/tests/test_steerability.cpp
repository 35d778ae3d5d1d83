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


#include <gtest/gtest.h>

#include <cmath>

#include "dilute/error.hpp"
#include "dilute/lie_closure.hpp"
#include "dilute/models.hpp"
#include "dilute/spectral.hpp"
#include "dilute/spin_algebra.hpp"
#include "dilute/steerability.hpp"
#include "oracles.hpp"

namespace dilute {
namespace {

TargetState product_down(int n) {
  StateVector v = StateVector::Zero(Index{1} << n);
  v(v.size() - 1) = 1.0;
  return TargetState{v, "product", 0.0};
}

TEST(Validity, AkltJumpsAreValid) {
  const ChainSpec c = aklt_chain(4);
  const TargetState t = aklt_ground_state(c);
  for (int link : {1, 2, 4}) {
    JumpValidity v = validate_jumps(aklt_jumps(link, c), t, link, c);
    EXPECT_TRUE(v.valid()) << "link " << link;
    EXPECT_EQ(v.kernel_dim, v.cold_dim);
  }
}

TEST(Validity, DetectsNonNilpotentJump) {
  const ChainSpec c = aklt_chain(3);
  const TargetState t = aklt_ground_state(c);
  std::vector<OperatorMatrix> jumps = aklt_jumps(1, c);
  jumps.push_back(embed(OperatorMatrix::identity(9), {1, 2}, c));
  JumpValidity v = validate_jumps(jumps, t, 1, c);
  EXPECT_FALSE(v.nilpotent);
  EXPECT_FALSE(v.valid());
}

TEST(Validity, DetectsOffLinkSupport) {
  const ChainSpec c = aklt_chain(3);
  const TargetState t = aklt_ground_state(c);
  JumpValidity v = validate_jumps(aklt_jumps(2, c), t, 1, c);
  EXPECT_FALSE(v.supported_on_link);
}

TEST(Validity, CoolingJumpsCoverHotSpace) {
  const ChainSpec c = qubit_chain(3);
  const TargetState t = ghz_state(3);
  const auto jumps = cooling_jumps(t, 1, c);
  EXPECT_TRUE(validate_jumps(jumps, t, 1, c).valid());
  const OperatorMatrix s = sum_jump_squares(jumps, c.dim());
  EXPECT_LT((s.dense() - hot_projector(t, 1, c).dense()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Necessary, HotSubspace) {
  // The reduced link state is rank deficient for both targets.
  EXPECT_TRUE(necessary_condition_hot(product_down(3), 1, qubit_chain(3)));
  EXPECT_TRUE(necessary_condition_hot(ghz_state(4), 2, qubit_chain(4)));
}

TEST(Kernelizer, ProductStateLocalDimension) {
  const ChainSpec c = qubit_chain(3, Boundary::open);
  KernelizerOptions o;
  o.cross_link = false;
  KernelizerBasis k = build_kernelizer(product_down(3), c, o);
  // Hermitian operators on the 3-dimensional complement of |00> on each link.
  for (Index d : k.local_dims) EXPECT_EQ(d, 9);
}

TEST(Kernelizer, GeneratorsAnnihilateTarget) {
  const ChainSpec c = aklt_chain(4);
  const TargetState t = aklt_ground_state(c);
  KernelizerBasis k = build_kernelizer(t, c);
  ASSERT_GT(k.size(), 0);
  for (const OperatorMatrix& g : k.generators) {
    EXPECT_LT((g.sparse() * t.vector).norm(), 1e-10);
    EXPECT_LT((g.dense() - g.dense().adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
  // Local groups are orthonormal in the trace inner product of the full chain.
  const auto local = k.local_generators(k.links.front());
  for (std::size_t a = 0; a < local.size(); ++a)
    for (std::size_t b = 0; b < local.size(); ++b) {
      const cplx ip = (local[a].dense().adjoint() * local[b].dense()).trace();
      EXPECT_NEAR(std::abs(ip), a == b ? 1.0 : 0.0, 1e-9);
    }
}

TEST(Kernelizer, SampleIsNormalizedAndAnnihilates) {
  const ChainSpec c = qubit_chain(4);
  const TargetState t = w_state(4);
  KernelizerBasis k = build_kernelizer(t, c);
  OperatorMatrix h = sample_delta_h(k, 3, 2.5);
  EXPECT_NEAR(h.dense().norm(), 2.5, 1e-9);
  EXPECT_LT((h.sparse() * t.vector).norm(), 1e-9);
  OperatorMatrix h2 = sample_delta_h(k, 3, 2.5);
  EXPECT_EQ((h.dense() - h2.dense()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(LieClosure, SpinHalf) {
  oracle::Spin s = oracle::spin(0.5);
  LieClosureReport r = lie_closure_dimension(std::vector<DenseMatrix>{s.x, s.y});
  EXPECT_EQ(r.dimension, 3);
  EXPECT_TRUE(r.full_rank());
  EXPECT_TRUE(r.converged);
}

TEST(LieClosure, SingleGeneratorIsAbelian) {
  oracle::Spin s = oracle::spin(1.0);
  LieClosureReport r = lie_closure_dimension(std::vector<DenseMatrix>{s.z});
  EXPECT_EQ(r.dimension, 1);
  EXPECT_EQ(r.target_dimension, 8);
}

TEST(LieClosure, SpinOneRepresentationOfSu2) {
  // The spin-1 irrep spans a 3-dimensional subalgebra of su(3).
  oracle::Spin s = oracle::spin(1.0);
  LieClosureReport r = lie_closure_dimension(std::vector<DenseMatrix>{s.x, s.z});
  EXPECT_EQ(r.dimension, 3);
  EXPECT_FALSE(r.full_rank());
}

TEST(LieClosure, OrderDoesNotMatter) {
  const ChainSpec c = aklt_chain(3);
  KernelizerBasis k = build_kernelizer(aklt_ground_state(c), c);
  LieClosureOptions o;
  LieClosureReport a = lie_closure_dimension(k, o);
  o.shuffle_seed = 19;
  LieClosureReport b = lie_closure_dimension(k, o);
  EXPECT_EQ(a.dimension, b.dimension);
}

TEST(Flow, GhzOnThreeQubits) {
  const ChainSpec c = qubit_chain(3);
  const TargetState t = ghz_state(3);
  KernelizerBasis k = build_kernelizer(t, c);
  FlowCheck f = necessary_condition_flow(k, t, 1, 7);
  for (const StateVector& w : f.witnesses) {
    EXPECT_NEAR(w.norm(), 1.0, 1e-9);
    EXPECT_LT(std::abs(w.dot(t.vector)), 1e-8);
  }
  EXPECT_EQ(f.passes, f.witnesses.empty());
}

TEST(Flow, DeterministicForSeed) {
  const ChainSpec c = qubit_chain(4);
  const TargetState t = ghz_state(4);
  KernelizerBasis k = build_kernelizer(t, c);
  FlowCheck a = necessary_condition_flow(k, t, 1, 5), b = necessary_condition_flow(k, t, 1, 5);
  EXPECT_EQ(a.passes, b.passes);
  EXPECT_EQ(a.common_eigenspaces, b.common_eigenspaces);
}

}  // namespace
}  // namespace dilute
