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

#include <algorithm>
#include <cmath>

#include "dilute/models.hpp"
#include "dilute/rng.hpp"
#include "dilute/spectral.hpp"
#include "dilute/spin_algebra.hpp"
#include "oracles.hpp"

namespace dilute {
namespace {

LindbladModel aklt_model(int n, double gamma, double alpha = 0.0) {
  const ChainSpec c = aklt_chain(n);
  LindbladModel m = build_aklt(c);
  m.jumps = aklt_jumps(1, c);
  m.gamma = gamma;
  if (alpha != 0.0) m.hamiltonian = OperatorMatrix((m.hamiltonian + aklt_delta_h(default_delta_h_links(c), alpha, c)).sparse(), true);
  return m;
}

LindbladModel amplitude_damping(double gamma) {
  StateVector g = StateVector::Zero(2), e = StateVector::Zero(2);
  g(1) = 1.0;
  e(0) = 1.0;
  return LindbladModel{qubit_chain(1, Boundary::open), OperatorMatrix::zero(2), {OperatorMatrix::outer(g, e)}, gamma};
}

DenseMatrix random_density(Index d, std::uint64_t seed) {
  RandomStream rng(seed);
  DenseMatrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = rng.complex_normal();
  DenseMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

TEST(HotCold, Dimensions) {
  for (int n : {4, 5}) {
    const ChainSpec c = aklt_chain(n);
    HotColdSplit s = hot_cold_split(aklt_ground_state(c), 1, c);
    EXPECT_EQ(s.hot.size(), 5);
    EXPECT_EQ(s.cold.size(), 4);
  }
  const ChainSpec mg = mg_chain(6);
  HotColdSplit s = hot_cold_split(mg_ground_states(mg).first, 1, mg);
  EXPECT_EQ(s.cold.size(), 1);
  EXPECT_EQ(s.hot.size(), 3);

  const ChainSpec q = qubit_chain(2, Boundary::open);
  StateVector up = StateVector::Zero(4);
  up(0) = 1.0;
  EXPECT_EQ(hot_cold_split(TargetState{up, "product", 0.0}, 1, q).cold.size(), 1);
}

TEST(HotCold, ReducedDensityMatchesPartialTraceOracle) {
  const ChainSpec c = aklt_chain(3);
  const StateVector psi = aklt_ground_state(c).vector;
  // Sites 1 and 2 are the leading digits, so rho_12 = M M^dagger with M the 9 x 3 reshape.
  DenseMatrix m(9, 3);
  for (Index i = 0; i < 27; ++i) m(i / 3, i % 3) = psi(i);
  const DenseMatrix want = m * m.adjoint();
  EXPECT_LT((reduced_density_matrix(psi, {1, 2}, c) - want).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Eigen, ReconstructsHamiltonian) {
  const OperatorMatrix h = aklt_model(4, 0.0, 0.7).hamiltonian;
  EigenDecomposition e = eigendecompose(h);
  DenseMatrix rebuilt = DenseMatrix::Zero(h.dim(), h.dim());
  DenseMatrix total = DenseMatrix::Zero(h.dim(), h.dim());
  for (std::size_t k = 0; k < e.eigenvalues.size(); ++k) {
    rebuilt += e.eigenvalues[k] * e.eigenspaces[k].projector();
    total += e.eigenspaces[k].projector();
  }
  EXPECT_LT((rebuilt - h.dense()).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((total - DenseMatrix::Identity(h.dim(), h.dim())).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_TRUE(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
}

TEST(Liouvillian, AmplitudeDampingByHand) {
  // Populations relax at gamma, coherences at gamma / 2.
  const LindbladModel m = amplitude_damping(1.0);
  GapReport r = liouvillian_gap(m);
  EXPECT_EQ(r.steady_state_count, 1);
  EXPECT_NEAR(*r.gap, 0.5, 1e-12);
  Eigen::VectorXcd ev = liouvillian_spectrum(m);
  std::vector<double> re;
  for (Index i = 0; i < ev.size(); ++i) re.push_back(ev(i).real());
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -1.0, 1e-12);
  EXPECT_NEAR(re[1], -0.5, 1e-12);
  EXPECT_NEAR(re[2], -0.5, 1e-12);
  EXPECT_NEAR(re[3], 0.0, 1e-12);
}

TEST(Liouvillian, SuperoperatorMatchesDirectGenerator) {
  const LindbladModel m = aklt_model(3, 0.3, 0.8);
  const SparseMatrix sup = liouvillian_superoperator(m);
  const DenseMatrix rho = random_density(m.dim(), 5);
  Eigen::VectorXcd vec(rho.size());
  for (Index i = 0; i < rho.rows(); ++i)
    for (Index j = 0; j < rho.cols(); ++j) vec(i * rho.cols() + j) = rho(i, j);
  Eigen::VectorXcd out = sup * vec;
  std::vector<oracle::Mat> jumps;
  for (const auto& l : m.jumps) jumps.push_back(l.dense());
  const oracle::Mat want = oracle::lindblad_rhs(m.hamiltonian.dense(), jumps, m.gamma, rho);
  double err = 0.0;
  for (Index i = 0; i < rho.rows(); ++i)
    for (Index j = 0; j < rho.cols(); ++j) err = std::max(err, std::abs(out(i * rho.cols() + j) - want(i, j)));
  EXPECT_LT(err, 1e-12);
  EXPECT_LT((apply_liouvillian(m, rho) - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Liouvillian, TraceAndHermiticityPreserved) {
  const LindbladModel m = aklt_model(3, 0.4, 1.0);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const DenseMatrix rho = random_density(m.dim(), seed);
    const DenseMatrix l = apply_liouvillian(m, rho);
    EXPECT_LT(std::abs(l.trace()), 1e-10);
    EXPECT_LT((l.adjoint() - l).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Liouvillian, TargetIsSteady) {
  for (int n : {3, 4}) {
    const LindbladModel m = aklt_model(n, 0.2, 0.5);
    const StateVector psi = aklt_ground_state(m.chain).vector;
    EXPECT_LT(apply_liouvillian(m, psi * psi.adjoint()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Liouvillian, DarkStatesGiveManySteadyStates) {
  const LindbladModel m = aklt_model(3, 0.1);
  EXPECT_GT(liouvillian_gap(m).steady_state_count, 1);
  const LindbladModel steered = aklt_model(3, 0.1, 1.0);
  GapReport r = liouvillian_gap(steered);
  EXPECT_EQ(r.steady_state_count, 1);
  EXPECT_GT(*r.gap, 0.0);
}

TEST(Liouvillian, IterativePathAgreesWithDense) {
  const LindbladModel m = aklt_model(3, 0.1, 1.0);
  const TargetState t = aklt_ground_state(m.chain);
  GapReport dense = liouvillian_gap(m, {}, &t);
  LiouvillianOptions opts;
  opts.dense_max_dim = 1;
  opts.dense_block_max = 0;
  GapReport iterative = liouvillian_gap(m, opts, &t);
  EXPECT_EQ(iterative.steady_state_count, 1);
  EXPECT_NEAR(*iterative.gap, *dense.gap, 1e-9);
}

TEST(Estimate, BoundHoldsAndWeakCouplingLimit) {
  const TargetState t = aklt_ground_state(aklt_chain(3));
  for (double alpha : {0.5, 2.0}) {
    for (double gamma : {1e-3, 1e-1}) {
      const LindbladModel m = aklt_model(3, gamma, alpha);
      const double gap = *liouvillian_gap(m, {}, &t).gap;
      const double est = *gap_estimate(m, t, 1).gap_estimate;
      EXPECT_LE(gap, est + 1e-9);
    }
  }
}

TEST(Estimate, FullHotProjectorGivesHalfGamma) {
  // One qubit, target |down>, P_hot = |up><up| covers the only excited level.
  const LindbladModel m = amplitude_damping(0.6);
  StateVector g = StateVector::Zero(2);
  g(1) = 1.0;
  const OperatorMatrix p = sum_jump_squares(m.jumps, 2);
  GapReport r = gap_estimate(m, TargetState{g, "down", 0.0}, p);
  EXPECT_NEAR(*r.Q, 1.0, 1e-14);
  EXPECT_NEAR(*r.gap_estimate, 0.3, 1e-14);
}

TEST(Estimate, DarkAndBrightChains) {
  const TargetState t3 = aklt_ground_state(aklt_chain(3));
  EXPECT_NEAR(*gap_estimate(aklt_model(3, 0.1), t3, 1).Q, 0.0, 1e-12);
  const TargetState t5 = aklt_ground_state(aklt_chain(5));
  EXPECT_GT(*gap_estimate(aklt_model(5, 0.1), t5, 1).Q, 1e-3);
}

TEST(Estimate, QProfileMinimumEqualsQ) {
  const LindbladModel m = aklt_model(6, 0.1);
  const TargetState t = aklt_ground_state(m.chain);
  QProfile p = q_energy_profile(m, t, 1);
  double q_min = 1.0;
  for (const auto& row : p.rows)
    if (row.epsilon > 1e-9) q_min = std::min(q_min, row.q);
  EXPECT_NEAR(q_min, *gap_estimate(m, t, 1).Q, 1e-12);
  EXPECT_NEAR(p.rows.front().q, 0.0, 1e-12);
}

TEST(Effective, WeakCouplingRatesMatchPerturbation) {
  // -Im(lambda) / gamma -> q_eps / 2 as gamma -> 0.
  const LindbladModel m = aklt_model(3, 1e-4, 1.0);
  const TargetState t = aklt_ground_state(m.chain);
  Eigen::VectorXcd lambda = effective_hamiltonian_spectrum(m, t);
  GapReport est = gap_estimate(m, t, sum_jump_squares(m.jumps, m.dim()));
  std::vector<double> rates;
  for (Index i = 0; i < lambda.size(); ++i) rates.push_back(-lambda(i).imag());
  std::vector<double> pert = est.perturbative_rates;
  std::sort(rates.begin(), rates.end());
  std::sort(pert.begin(), pert.end());
  ASSERT_EQ(rates.size(), pert.size());
  for (std::size_t i = 0; i < rates.size(); ++i) EXPECT_NEAR(rates[i], pert[i], 1e-3 * m.gamma);
}

TEST(Effective, HermitianLimitHasNoDecay) {
  LindbladModel m = aklt_model(3, 0.0, 1.0);
  const TargetState t = aklt_ground_state(m.chain);
  Eigen::VectorXcd lambda = effective_hamiltonian_spectrum(m, t);
  EXPECT_LT(lambda.imag().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Effective, EigenvaluesAppearInLiouvillianSpectrum) {
  // -i lambda of the effective Hamiltonian is a Liouvillian eigenvalue (coherence with the target).
  const LindbladModel m = aklt_model(3, 0.3, 1.0);
  const TargetState t = aklt_ground_state(m.chain);
  Eigen::VectorXcd lambda = effective_hamiltonian_spectrum(m, t);
  Eigen::VectorXcd full = liouvillian_spectrum(m);
  for (Index i = 0; i < lambda.size(); ++i) {
    const cplx want = cplx(0, -1) * lambda(i);
    double best = INFINITY;
    for (Index k = 0; k < full.size(); ++k) best = std::min(best, std::abs(full(k) - want));
    EXPECT_LT(best, 1e-7);
  }
}

TEST(DarkStates, AkltThreeAndFive) {
  auto dark3 = find_dark_states(aklt_model(3, 0.1), aklt_ground_state(aklt_chain(3)));
  ASSERT_FALSE(dark3.empty());
  for (const auto& d : dark3) EXPECT_NEAR(d.link_j2[0], 2.0, 1e-8);
  EXPECT_TRUE(find_dark_states(aklt_model(5, 0.1), aklt_ground_state(aklt_chain(5))).empty());
}

TEST(DarkStates, AreSteadyAndExcited) {
  const LindbladModel m = aklt_model(4, 0.1);
  for (const auto& d : find_dark_states(m, aklt_ground_state(m.chain))) {
    EXPECT_GT(d.energy, 0.1);
    EXPECT_LT((m.hamiltonian.apply(d.vector) - d.energy * d.vector).norm(), 1e-9);
    EXPECT_LT(apply_liouvillian(m, d.vector * d.vector.adjoint()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

}  // namespace
}  // namespace dilute
