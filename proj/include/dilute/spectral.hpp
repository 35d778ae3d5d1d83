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

// Hot/cold split, perturbative gap estimate, effective non-Hermitian Hamiltonian,
// dark states and the full Liouvillian spectrum.

#ifndef DILUTE_SPECTRAL_HPP
#define DILUTE_SPECTRAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "dilute/models.hpp"
#include "dilute/types.hpp"

namespace dilute {

enum class GapMethod { full_liouvillian, effective_hamiltonian, trajectory_fit, perturbative_estimate };
const char* to_string(GapMethod method);

inline constexpr double kDegeneracyTolerance = 1e-9;  // relative to the spectral radius bound
inline constexpr double kSteadyStateTolerance = 1e-8;  // relative to gamma
inline constexpr double kRankTolerance = 1e-10;

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // one per eigenspace, ascending
  std::vector<SubspaceBasis> eigenspaces;
};

// Dense, block by block over the connected components of the sparsity pattern.
EigenDecomposition eigendecompose(const OperatorMatrix& h, double rel_tol = kDegeneracyTolerance);

DenseMatrix reduced_density_matrix(const StateVector& psi, const std::vector<int>& sites, const ChainSpec& chain);

struct HotColdSplit {
  SubspaceBasis cold;
  SubspaceBasis hot;
  DenseMatrix reduced_density;  // on the d^2-dimensional link space
};

HotColdSplit hot_cold_split(const TargetState& target, int link, const ChainSpec& chain,
                            double rank_tol = kRankTolerance);
// Embedded projector onto the hot link subspace.
OperatorMatrix hot_projector(const TargetState& target, int link, const ChainSpec& chain);

struct GapReport {
  std::optional<double> gap;
  std::optional<double> gap_estimate;
  std::optional<double> Q;
  GapMethod method = GapMethod::perturbative_estimate;
  int steady_state_count = 0;
  bool weak_coupling_valid = true;
  // (gamma/2) times the eigenvalues of P_hot compressed into each excited eigenspace.
  std::vector<double> perturbative_rates;
  std::vector<std::string> warnings;
};

// Operator whose weight drives the decay: sum L^dag L of the model's jumps, or the
// hot projector of the link when the model has no jumps. For N=3 AKLT the
// reduced link state has rank 3, so its kernel is larger than the J=2 space the
// jumps act on; the jump form is what the dynamics sees.
OperatorMatrix cooling_projector(const LindbladModel& model, const TargetState& target, int link);

// Perturbative estimate Qγ/2 with P_hot = cooling_projector(model, target, link).
GapReport gap_estimate(const LindbladModel& model, const TargetState& target, int link);
// Same with a caller-supplied Hermitian hot operator, e.g. sum L^dag L over several links.
GapReport gap_estimate(const LindbladModel& model, const TargetState& target, const OperatorMatrix& p_hot);

struct QProfileRow {
  double epsilon;
  double q;
};

struct QBin {
  double lo, hi;
  double mean, std;
  int count;
};

struct QProfile {
  std::vector<QProfileRow> rows;  // ascending in epsilon, target level included
  std::vector<QBin> bins;
  double bin_width = 0.5;
};

QProfile q_energy_profile(const LindbladModel& model, const TargetState& target, int link, double bin_width = 0.5);

// Decay rates -Im(lambda) of H - eps_target - i gamma/2 sum L^dag L on the complement of the target.
GapReport effective_hamiltonian_gap(const LindbladModel& model, const TargetState& target);
// All eigenvalues lambda of the effective Hamiltonian on the complement of the target.
Eigen::VectorXcd effective_hamiltonian_spectrum(const LindbladModel& model, const TargetState& target);

struct DarkState {
  StateVector vector;
  double energy = 0.0;
  std::vector<double> link_j2;  // <J^2> on every link of the chain, link 1 first
  std::vector<double> link_jz;
};

// Excited eigenvectors of H with zero weight on sum L^dag L. Within degenerate
// eigenspaces the basis diagonalizes the link J^2 operators in link order.
std::vector<DarkState> find_dark_states(const LindbladModel& model, const TargetState& target, double tol = 1e-8);

// Row-major vectorization: vec(rho)[i*D + j] = rho(i, j).
SparseMatrix liouvillian_superoperator(const LindbladModel& model);
// Direct evaluation of the generator on a density matrix.
DenseMatrix apply_liouvillian(const LindbladModel& model, const DenseMatrix& rho);

struct LiouvillianOptions {
  Index dense_max_dim = 81;      // Hilbert dimension up to which the full superoperator is dense
  Index iterative_max_dim = 729;
  Index dense_block_max = 1200;  // symmetry blocks up to this size are solved densely
  int n_eigenvalues = 8;         // per block on the iterative path
  double arnoldi_tol = 1e-12;
};

// Steady-state count and gap. On the iterative path the eigenvalues nearest zero are
// combined with the effective-Hamiltonian rates of the target when one is supplied.
GapReport liouvillian_gap(const LindbladModel& model, const LiouvillianOptions& options = {},
                          const TargetState* target = nullptr);

// Full spectrum of the superoperator (dense path only).
Eigen::VectorXcd liouvillian_spectrum(const LindbladModel& model);

}  // namespace dilute

#endif  // DILUTE_SPECTRAL_HPP
