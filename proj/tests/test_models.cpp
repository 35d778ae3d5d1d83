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

#include "dilute/models.hpp"
#include "dilute/rng.hpp"
#include "dilute/spectral.hpp"
#include "dilute/spin_algebra.hpp"
#include "dilute/steerability.hpp"
#include "oracles.hpp"

namespace dilute {
namespace {

// Two-site operator on sites (a, b) of an n-site register, 0-based, built from
// single-site matrix units so that wrapped links need no permutation.
oracle::Mat two_site(const oracle::Mat& op, int a, int b, int n, int d) {
  oracle::Mat out = oracle::Mat::Zero(static_cast<Index>(std::pow(d, n)), static_cast<Index>(std::pow(d, n)));
  for (int i = 0; i < d * d; ++i) {
    for (int j = 0; j < d * d; ++j) {
      if (op(i, j) == 0.0) continue;
      oracle::Mat ua = oracle::Mat::Zero(d, d), ub = oracle::Mat::Zero(d, d);
      ua(i / d, j / d) = 1.0;
      ub(i % d, j % d) = 1.0;
      out += op(i, j) * oracle::on_sites(ua, a, n, d) * oracle::on_sites(ub, b, n, d);
    }
  }
  return out;
}

TEST(Aklt, GroundStateMatchesIteratedProjection) {
  const oracle::Mat p2 = oracle::pair_projector(1.0, 2.0);
  for (int n = 3; n <= 6; ++n) {
    std::vector<oracle::Mat> keep;
    for (int i = 0; i < n; ++i) {
      const oracle::Mat p = two_site(p2, i, (i + 1) % n, n, 3);
      keep.push_back(oracle::Mat::Identity(p.rows(), p.cols()) - p);
    }
    RandomStream rng(derive_seed(17, {static_cast<std::uint64_t>(n)}));
    StateVector v = haar_state(keep[0].rows(), rng);
    const StateVector psi = aklt_ground_state(aklt_chain(n)).vector;
    double fidelity = 0.0;
    for (int sweep = 0; sweep < 20000 && fidelity < 1.0 - 1e-10; ++sweep) {
      for (const auto& k : keep) v = k * v;
      v.normalize();
      fidelity = std::norm(psi.dot(v));
    }
    EXPECT_GT(fidelity, 1.0 - 1e-8) << "N=" << n;
  }
}

TEST(Aklt, HamiltonianIsSumOfLinkProjectors) {
  const int n = 4;
  const oracle::Mat p2 = oracle::pair_projector(1.0, 2.0);
  oracle::Mat h = oracle::Mat::Zero(81, 81);
  for (int i = 0; i < n; ++i) h += two_site(p2, i, (i + 1) % n, n, 3);
  EXPECT_LT((build_aklt(aklt_chain(n)).hamiltonian.dense() - h).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Aklt, DeltaHAnnihilatesTarget) {
  const ChainSpec c = aklt_chain(5);
  const OperatorMatrix dh = aklt_delta_h(default_delta_h_links(c), 1.3, c);
  EXPECT_LT(dh.hermiticity_error(), 1e-14);
  EXPECT_LT(dh.apply(aklt_ground_state(c).vector).norm(), 1e-12);
  EXPECT_GT(dh.hs_norm(), 1.0);
}

TEST(Aklt, JumpsOnSmallestValidChain) {
  const ChainSpec c = aklt_chain(4);
  const TargetState t = aklt_ground_state(c);
  const auto jumps = aklt_jumps(2, c);
  ASSERT_EQ(jumps.size(), 5u);
  for (const auto& l : jumps) {
    EXPECT_LT(l.apply(t.vector).norm(), 1e-12);
    EXPECT_LT((l * l).max_abs(), 1e-14);
  }
}

TEST(MajumdarGhosh, MinusSteadyPlusNot) {
  for (int n : {4, 6}) {
    const ChainSpec c = mg_chain(n);
    LindbladModel m = build_mg(c);
    m.jumps = mg_jumps(1, c);
    m.gamma = 1.0;
    auto [minus, plus] = mg_ground_states(c);
    std::vector<oracle::Mat> jumps;
    for (const auto& l : m.jumps) jumps.push_back(l.dense());
    const oracle::Mat h = m.hamiltonian.dense();
    const oracle::Mat rm = minus.vector * minus.vector.adjoint(), rp = plus.vector * plus.vector.adjoint();
    EXPECT_LT(oracle::lindblad_rhs(h, jumps, 1.0, rm).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(oracle::lindblad_rhs(h, jumps, 1.0, rp).cwiseAbs().maxCoeff(), 1e-3);
    EXPECT_LT(apply_liouvillian(m, rm).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MajumdarGhosh, GroundStatesAreDistinctSingletCovers) {
  const ChainSpec c = mg_chain(6);
  auto [minus, plus] = mg_ground_states(c);
  EXPECT_NEAR(minus.vector.norm(), 1.0, 1e-12);
  EXPECT_NEAR(plus.vector.norm(), 1.0, 1e-12);
  // Overlap of the two dimer coverings of a ring of N spins-1/2 is 2 / 2^(N/2) in magnitude.
  EXPECT_NEAR(std::abs(minus.vector.dot(plus.vector)), 2.0 / 8.0, 1e-12);
}

TEST(MajumdarGhosh, RejectsOddChains) {
  EXPECT_THROW(build_mg(ChainSpec{5, HalfInteger::from_twice(1), Boundary::periodic}), Error);
}

TEST(Targets, GhzAndW) {
  const TargetState g = ghz_state(3), w = w_state(3);
  EXPECT_NEAR(g.vector.norm(), 1.0, 1e-14);
  EXPECT_NEAR(w.vector.norm(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(g.vector(0)), 1.0 / std::sqrt(2.0), 1e-14);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(std::abs(w.vector(Index{1} << k)), 1.0 / std::sqrt(3.0), 1e-14);
}

TEST(Jumps, UserMapMatchesHotColdCondition) {
  // Any map from an orthonormal hot basis onto cold states yields a valid set, and
  // the hot condition holds, for targets with a rank-deficient link state.
  for (int n : {3, 4}) {
    const ChainSpec c = qubit_chain(n);
    for (const TargetState& t : {ghz_state(n), w_state(n)}) {
      const bool hot = necessary_condition_hot(t, 1, c);
      if (!hot) continue;
      const auto jumps = cooling_jumps(t, 1, c);
      EXPECT_TRUE(validate_jumps(jumps, t, 1, c).valid()) << t.label << " N=" << n;
    }
  }
}

TEST(Jumps, SumOfSquaresIsHotProjector) {
  const ChainSpec c = aklt_chain(5);
  const TargetState t = aklt_ground_state(c);
  for (int link : {1, 3, 5}) {
    const auto s = sum_jump_squares(aklt_jumps(link, c), c.dim());
    EXPECT_LT((s - hot_projector(t, link, c)).max_abs(), 1e-10);
  }
}

}  // namespace
}  // namespace dilute
