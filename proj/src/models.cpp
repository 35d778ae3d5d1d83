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

#include "dilute/models.hpp"

#include <cmath>

#include "dilute/spin_algebra.hpp"

namespace dilute {

namespace {

constexpr HalfInteger kOne = HalfInteger::from_twice(2);
constexpr HalfInteger kHalf = HalfInteger::from_twice(1);

HalfInteger hi(int value) { return HalfInteger::from_twice(2 * value); }

void check_aklt_chain(const ChainSpec& chain) {
  chain.validate();
  require(chain.local_spin == kOne, ErrorKind::unsupported_model, "AKLT needs spin-1 sites");
  require(chain.boundary == Boundary::periodic, ErrorKind::unsupported_model, "AKLT needs periodic boundaries");
  require(chain.n_sites >= 2, ErrorKind::unsupported_model, "AKLT needs N >= 2");
}

void check_mg_chain(const ChainSpec& chain) {
  chain.validate();
  require(chain.local_spin == kHalf, ErrorKind::unsupported_model, "Majumdar-Ghosh needs spin-1/2 sites");
  require(chain.boundary == Boundary::periodic, ErrorKind::unsupported_model,
          "Majumdar-Ghosh needs periodic boundaries");
  require(chain.n_sites >= 4 && chain.n_sites % 2 == 0, ErrorKind::unsupported_model,
          "Majumdar-Ghosh needs an even N >= 4");
}

// Two-spin-1 coupled state |J, m>.
StateVector pair_state(int j, int m) { return coupled_basis_state(2, kOne, hi(j), hi(m)); }

StateVector half_pair_state(int j, int m) { return coupled_basis_state(2, kHalf, hi(j), hi(m)); }

void normalize_sign(StateVector& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::abs(v(i)) / v(i);
      return;
    }
  }
}

StateVector singlet_cover(const ChainSpec& chain, int first_site) {
  const int n = chain.n_sites;
  const Index dim = chain.dim();
  const double amp = 1.0 / std::sqrt(2.0);
  StateVector v(dim);
  for (Index idx = 0; idx < dim; ++idx) {
    // bit(site) = 1 means spin down; site 1 is the most significant bit.
    auto bit = [&](int site) { return static_cast<int>((idx >> (n - site)) & 1); };
    cplx a = 1.0;
    for (int p = 0; p < n / 2 && a != 0.0; ++p) {
      int s1 = first_site + 2 * p;
      int s2 = wrap_site(s1 + 1, chain);
      int b1 = bit(s1), b2 = bit(s2);
      if (b1 == b2) a = 0.0;
      else a *= (b1 == 0 ? amp : -amp);
    }
    v(idx) = a;
  }
  return v;
}

}  // namespace

void LindbladModel::validate() const {
  require(hamiltonian.dim() == chain.dim(), ErrorKind::invalid_argument, "Hamiltonian dimension mismatch");
  require(hamiltonian.hermiticity_error() <= kHermitianTolerance, ErrorKind::invalid_argument,
          "Hamiltonian is not Hermitian");
  require(gamma >= 0.0 && std::isfinite(gamma), ErrorKind::invalid_argument, "gamma must be nonnegative");
  for (const auto& l : jumps)
    require(l.dim() == hamiltonian.dim(), ErrorKind::invalid_argument, "jump dimension mismatch");
}

void TargetState::check_eigenvector(const OperatorMatrix& hamiltonian, double tol) const {
  require(vector.size() == hamiltonian.dim(), ErrorKind::invalid_target, "target dimension mismatch");
  require(is_normalized(vector), ErrorKind::invalid_target, "target is not normalized");
  double residual = (hamiltonian.apply(vector) - energy * vector).norm();
  require(residual <= tol, ErrorKind::invalid_target,
          "target is not an eigenvector with energy " + std::to_string(energy) +
              " (residual " + std::to_string(residual) + ")");
}

ChainSpec aklt_chain(int n_sites) { return ChainSpec{n_sites, kOne, Boundary::periodic}; }
ChainSpec mg_chain(int n_sites) { return ChainSpec{n_sites, kHalf, Boundary::periodic}; }
ChainSpec qubit_chain(int n_sites, Boundary boundary) { return ChainSpec{n_sites, kHalf, boundary}; }

LindbladModel build_aklt(const ChainSpec& chain) {
  check_aklt_chain(chain);
  OperatorMatrix p2 = total_spin_projector(2, kOne, hi(2));
  OperatorMatrix h = OperatorMatrix::zero(chain.dim());
  for (int i = 1; i <= chain.n_sites; ++i) h += embed(p2, link_sites(i, chain), chain);
  return LindbladModel{chain, OperatorMatrix(h.sparse(), true), {}, 0.0};
}

TargetState aklt_ground_state(const ChainSpec& chain) {
  check_aklt_chain(chain);
  using M2 = Eigen::Matrix2d;
  M2 splus, sminus, sz;
  splus << 0, 1, 0, 0;
  sminus << 0, 0, 1, 0;
  sz << 1, 0, 0, -1;
  // Local index 0,1,2 carries m = +1, 0, -1.
  const M2 a[3] = {std::sqrt(2.0 / 3.0) * splus, -std::sqrt(1.0 / 3.0) * sz, -std::sqrt(2.0 / 3.0) * sminus};
  const int n = chain.n_sites;
  const Index dim = chain.dim();
  StateVector v(dim);
  for (Index idx = 0; idx < dim; ++idx) {
    M2 prod = M2::Identity();
    Index rem = idx;
    // Digits from the last site backwards.
    for (int site = n; site >= 1; --site) {
      prod = a[rem % 3] * prod;
      rem /= 3;
    }
    v(idx) = prod.trace();
  }
  v.normalize();
  normalize_sign(v);
  return TargetState{v, "aklt", 0.0};
}

std::vector<OperatorMatrix> aklt_jumps(int link, const ChainSpec& chain) {
  check_aklt_chain(chain);
  const std::pair<int, int> map[5] = {{1, 2}, {1, 1}, {0, 0}, {-1, -1}, {-1, -2}};
  std::vector<std::pair<StateVector, StateVector>> pairs;
  for (auto [m_cold, m_hot] : map) pairs.emplace_back(pair_state(1, m_cold), pair_state(2, m_hot));
  return hot_to_cold_jumps(pairs, link, chain);
}

LindbladModel build_mg(const ChainSpec& chain) {
  check_mg_chain(chain);
  OperatorMatrix p32 = total_spin_projector(3, kHalf, HalfInteger::from_twice(3));
  OperatorMatrix h = OperatorMatrix::zero(chain.dim());
  for (int i = 1; i <= chain.n_sites; ++i) {
    std::vector<int> sites{i, wrap_site(i + 1, chain), wrap_site(i + 2, chain)};
    h += embed(p32, sites, chain);
  }
  return LindbladModel{chain, OperatorMatrix((h * cplx(12.0, 0.0)).sparse(), true), {}, 0.0};
}

std::pair<TargetState, TargetState> mg_ground_states(const ChainSpec& chain) {
  check_mg_chain(chain);
  return {TargetState{singlet_cover(chain, 1), "mg_minus", 0.0}, TargetState{singlet_cover(chain, 2), "mg_plus", 0.0}};
}

std::vector<OperatorMatrix> mg_jumps(int link, const ChainSpec& chain) {
  check_mg_chain(chain);
  StateVector singlet = half_pair_state(0, 0);
  std::vector<std::pair<StateVector, StateVector>> pairs{
      {singlet, half_pair_state(1, 1)}, {singlet, half_pair_state(1, -1)}, {singlet, half_pair_state(1, 0)}};
  return hot_to_cold_jumps(pairs, link, chain);
}

OperatorMatrix aklt_delta_h(const std::vector<int>& links, double alpha, const ChainSpec& chain) {
  check_aklt_chain(chain);
  require(!links.empty(), ErrorKind::invalid_argument, "delta H needs at least one link");
  DenseMatrix jx = DenseMatrix::Zero(9, 9);
  for (int m = -2; m <= 1; ++m) jx += pair_state(2, m) * pair_state(2, m + 1).adjoint();
  jx += jx.adjoint().eval();
  OperatorMatrix local = OperatorMatrix::from_dense(jx * alpha, true);
  OperatorMatrix out = OperatorMatrix::zero(chain.dim());
  for (int link : links) out += embed(local, link_sites(link, chain), chain);
  return OperatorMatrix(out.sparse(), true);
}

std::vector<int> default_delta_h_links(const ChainSpec& chain) {
  std::vector<int> links;
  for (int i = 1; i < chain.n_sites; ++i) links.push_back(i);
  return links;
}

TargetState ghz_state(int n) {
  require(n >= 2, ErrorKind::invalid_argument, "GHZ needs n >= 2");
  require(n <= 30, ErrorKind::capacity_exceeded, "GHZ register too large");
  const Index dim = Index{1} << n;
  StateVector v = StateVector::Zero(dim);
  v(0) = v(dim - 1) = 1.0 / std::sqrt(2.0);
  return TargetState{v, "ghz", 0.0};
}

TargetState w_state(int n) {
  require(n >= 2, ErrorKind::invalid_argument, "W needs n >= 2");
  require(n <= 30, ErrorKind::capacity_exceeded, "W register too large");
  const Index dim = Index{1} << n;
  StateVector v = StateVector::Zero(dim);
  for (int k = 0; k < n; ++k) v(Index{1} << k) = 1.0 / std::sqrt(static_cast<double>(n));
  return TargetState{v, "w", 0.0};
}

OperatorMatrix link_transition(const StateVector& cold, const StateVector& hot, int link, const ChainSpec& chain) {
  const Index d = chain.local_dim();
  require(cold.size() == d * d && hot.size() == d * d, ErrorKind::invalid_argument,
          "link states must have dimension d^2");
  return embed(OperatorMatrix::outer(cold, hot), link_sites(link, chain), chain);
}

std::vector<OperatorMatrix> hot_to_cold_jumps(const std::vector<std::pair<StateVector, StateVector>>& map,
                                              int link, const ChainSpec& chain) {
  std::vector<OperatorMatrix> jumps;
  for (const auto& [cold, hot] : map) jumps.push_back(link_transition(cold, hot, link, chain));
  return jumps;
}

OperatorMatrix sum_jump_squares(const std::vector<OperatorMatrix>& jumps, Index dim) {
  OperatorMatrix s = OperatorMatrix::zero(dim);
  for (const auto& l : jumps) s += l.adjoint() * l;
  return OperatorMatrix(s.sparse(), true);
}

}  // namespace dilute
