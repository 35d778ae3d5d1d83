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

#include "dilute/spin_algebra.hpp"

#include <algorithm>
#include <cmath>

#include "dilute/linalg.hpp"

namespace dilute {

namespace {

using Triplet = Eigen::Triplet<cplx>;

// Number of product states with total 2M = twice_m, indexed by (twice_m + n*2s).
std::vector<long long> magnetization_counts(int n, int twice_s) {
  const int d = twice_s + 1;
  std::vector<long long> counts{1};
  for (int site = 0; site < n; ++site) {
    std::vector<long long> next(counts.size() + d - 1, 0);
    for (size_t k = 0; k < counts.size(); ++k)
      for (int a = 0; a < d; ++a) next[k + a] += counts[k];
    counts = std::move(next);
  }
  // counts[k] is the number of states with sum of local indices k, i.e. 2M = n*2s - 2k.
  return counts;
}

long long count_with_twice_m(int n, int twice_s, int twice_m) {
  const int max_twice = n * twice_s;
  if (std::abs(twice_m) > max_twice || (max_twice - twice_m) % 2 != 0) return 0;
  auto counts = magnetization_counts(n, twice_s);
  return counts[(max_twice - twice_m) / 2];
}

ChainSpec register_chain(int n, HalfInteger s) {
  require(n >= 1, ErrorKind::invalid_argument, "need at least one coupled spin");
  require(s.twice() >= 1, ErrorKind::invalid_argument, "spin must be at least 1/2");
  return ChainSpec{n, s, Boundary::open};
}

void fix_sign(StateVector& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i).real() < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

SpinMatrices spin_matrices(HalfInteger s) {
  const int twice_s = s.twice();
  require(twice_s >= 1, ErrorKind::invalid_argument, "spin must be a positive half-integer");
  const int d = twice_s + 1;
  const double sv = s.value();
  std::vector<Triplet> zt, pt, mt;
  for (int k = 0; k < d; ++k) {
    double m = sv - k;
    zt.emplace_back(k, k, m);
    if (k >= 1) {
      // S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>, and |m+1> has index k-1.
      double c = std::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
      pt.emplace_back(k - 1, k, c);
      mt.emplace_back(k, k - 1, c);
    }
  }
  SparseMatrix z(d, d), p(d, d), mm(d, d);
  z.setFromTriplets(zt.begin(), zt.end());
  p.setFromTriplets(pt.begin(), pt.end());
  mm.setFromTriplets(mt.begin(), mt.end());
  SpinMatrices out;
  out.z = OperatorMatrix(z, true);
  out.plus = OperatorMatrix(p);
  out.minus = OperatorMatrix(mm);
  out.x = OperatorMatrix(SparseMatrix((p + mm) * cplx(0.5, 0.0)), true);
  out.y = OperatorMatrix(SparseMatrix((p - mm) * cplx(0.0, -0.5)), true);
  return out;
}

int wrap_site(int site, const ChainSpec& chain) {
  const int n = chain.n_sites;
  if (site >= 1 && site <= n) return site;
  require(chain.boundary == Boundary::periodic, ErrorKind::invalid_argument,
          "site " + std::to_string(site) + " outside an open chain of " + std::to_string(n));
  require(site > n && site <= 2 * n, ErrorKind::invalid_argument,
          "site " + std::to_string(site) + " outside the chain");
  return site - n;
}

std::vector<int> link_sites(int link, const ChainSpec& chain) {
  require(link >= 1 && link <= chain.n_sites, ErrorKind::invalid_argument,
          "link " + std::to_string(link) + " out of range");
  if (chain.boundary == Boundary::open)
    require(link < chain.n_sites, ErrorKind::invalid_argument, "open chain has no link " + std::to_string(link));
  return {link, wrap_site(link + 1, chain)};
}

std::vector<int> chain_links(const ChainSpec& chain) {
  std::vector<int> links;
  int last = chain.n_sites - 1;
  if (chain.boundary == Boundary::periodic && chain.n_sites >= 3) last = chain.n_sites;
  for (int i = 1; i <= last; ++i) links.push_back(i);
  return links;
}

OperatorMatrix embed(const OperatorMatrix& local_op, const std::vector<int>& sites, const ChainSpec& chain) {
  chain.validate();
  require(!sites.empty(), ErrorKind::invalid_argument, "embed needs at least one site");
  const int n = chain.n_sites;
  const Index d = chain.local_dim();
  std::vector<int> wrapped;
  for (int s : sites) wrapped.push_back(wrap_site(s, chain));
  {
    auto sorted = wrapped;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorKind::invalid_argument,
            "embed sites must be distinct");
  }
  const int k = static_cast<int>(wrapped.size());
  Index local_dim = 1;
  for (int i = 0; i < k; ++i) local_dim *= d;
  require(local_op.dim() == local_dim, ErrorKind::invalid_argument, "local operator dimension mismatch");

  std::vector<Index> stride(n + 1);
  Index st = 1;
  for (int site = n; site >= 1; --site) {
    stride[site] = st;
    st *= d;
  }
  const Index full_dim = st;

  // Offsets of local basis states, first listed site most significant.
  std::vector<Index> local_offset(local_dim, 0);
  for (Index a = 0; a < local_dim; ++a) {
    Index rem = a;
    for (int j = k - 1; j >= 0; --j) {
      local_offset[a] += (rem % d) * stride[wrapped[j]];
      rem /= d;
    }
  }
  // Offsets of configurations of the untouched sites.
  std::vector<char> listed(n + 1, 0);
  for (int s : wrapped) listed[s] = 1;
  std::vector<Index> rest_offset{0};
  for (int site = 1; site <= n; ++site) {
    if (listed[site]) continue;
    std::vector<Index> next;
    next.reserve(rest_offset.size() * d);
    for (Index off : rest_offset)
      for (Index a = 0; a < d; ++a) next.push_back(off + a * stride[site]);
    rest_offset = std::move(next);
  }

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<size_t>(local_op.nonzeros()) * rest_offset.size());
  const SparseMatrix& m = local_op.sparse();
  for (Index col = 0; col < m.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(m, col); it; ++it)
      for (Index off : rest_offset)
        triplets.emplace_back(off + local_offset[it.row()], off + local_offset[it.col()], it.value());
  SparseMatrix full(full_dim, full_dim);
  full.setFromTriplets(triplets.begin(), triplets.end());
  OperatorMatrix out(std::move(full));
  if (local_op.hermitian_hint()) out = OperatorMatrix(out.sparse(), true);
  return out;
}

TotalSpin total_spin_operators(int n_coupled, HalfInteger s) {
  ChainSpec reg = register_chain(n_coupled, s);
  SpinMatrices sm = spin_matrices(s);
  TotalSpin t;
  const Index dim = reg.dim();
  t.jz = OperatorMatrix::zero(dim);
  t.jplus = OperatorMatrix::zero(dim);
  t.jminus = OperatorMatrix::zero(dim);
  for (int site = 1; site <= n_coupled; ++site) {
    t.jz += embed(sm.z, {site}, reg);
    t.jplus += embed(sm.plus, {site}, reg);
    t.jminus += embed(sm.minus, {site}, reg);
  }
  OperatorMatrix j2 = t.jz * t.jz + (t.jplus * t.jminus + t.jminus * t.jplus) * cplx(0.5, 0.0);
  t.j2 = OperatorMatrix(j2.sparse(), true);
  return t;
}

int spin_multiplicity(int n_coupled, HalfInteger s, HalfInteger j) {
  register_chain(n_coupled, s);
  if (j.twice() < 0) return 0;
  long long here = count_with_twice_m(n_coupled, s.twice(), j.twice());
  long long above = count_with_twice_m(n_coupled, s.twice(), j.twice() + 2);
  return static_cast<int>(here - above);
}

std::vector<HalfInteger> admissible_total_spins(int n_coupled, HalfInteger s) {
  std::vector<HalfInteger> out;
  const int max_twice = n_coupled * s.twice();
  for (int tj = max_twice % 2; tj <= max_twice; tj += 2)
    if (spin_multiplicity(n_coupled, s, HalfInteger::from_twice(tj)) > 0) out.push_back(HalfInteger::from_twice(tj));
  return out;
}

OperatorMatrix total_spin_projector(int n_coupled, HalfInteger s, HalfInteger j) {
  require(spin_multiplicity(n_coupled, s, j) > 0, ErrorKind::invalid_argument,
          "total spin " + j.str() + " is not admissible");
  TotalSpin t = total_spin_operators(n_coupled, s);
  const Index dim = t.j2.dim();
  const double target = j.value() * (j.value() + 1.0);
  OperatorMatrix p = OperatorMatrix::identity(dim);
  for (HalfInteger other : admissible_total_spins(n_coupled, s)) {
    if (other == j) continue;
    const double c = other.value() * (other.value() + 1.0);
    OperatorMatrix factor = (t.j2 - OperatorMatrix::identity(dim) * cplx(c, 0.0)) * cplx(1.0 / (target - c), 0.0);
    p = p * factor;
  }
  return OperatorMatrix(p.sparse(), true);
}

StateVector coupled_basis_state(int n_coupled, HalfInteger s, HalfInteger j, HalfInteger mj, int copy) {
  const int mult = spin_multiplicity(n_coupled, s, j);
  require(mult > 0, ErrorKind::invalid_argument, "total spin " + j.str() + " is not admissible");
  require(std::abs(mj.twice()) <= j.twice() && (j.twice() - mj.twice()) % 2 == 0, ErrorKind::invalid_argument,
          "|mJ| must not exceed J");
  require(copy >= 0 && copy < mult, ErrorKind::invalid_argument, "multiplet copy index out of range");

  ChainSpec reg = register_chain(n_coupled, s);
  TotalSpin t = total_spin_operators(n_coupled, s);
  const Index dim = reg.dim();

  // Product states with total 2M = 2J.
  std::vector<Index> sector;
  {
    RealVector diag = t.jz.dense().diagonal().real();
    for (Index i = 0; i < dim; ++i)
      if (std::abs(2.0 * diag(i) - j.twice()) < 1e-9) sector.push_back(i);
  }
  RealMatrix j2_sector = linalg::dense_block(t.j2.sparse(), sector).real();
  linalg::RealSymmetricEigen es = linalg::symmetric_eigen(j2_sector);
  const double target = j.value() * (j.value() + 1.0);
  std::vector<Index> hw_cols;
  for (Index i = 0; i < es.values.size(); ++i)
    if (std::abs(es.values(i) - target) < 1e-8) hw_cols.push_back(i);
  require(static_cast<int>(hw_cols.size()) == mult, ErrorKind::solver_failure, "highest-weight space mismatch");
  RealMatrix hw(static_cast<Index>(sector.size()), mult);
  for (int c = 0; c < mult; ++c) hw.col(c) = es.vectors.col(hw_cols[c]);

  // Seniority ordering by intermediate couplings (1..k), smallest first.
  std::vector<RealMatrix> groups{hw};
  for (int k = 2; k < n_coupled && static_cast<int>(groups.size()) < mult; ++k) {
    ChainSpec sub = reg;
    TotalSpin partial = total_spin_operators(k, s);
    std::vector<int> sites;
    for (int i = 1; i <= k; ++i) sites.push_back(i);
    RealMatrix jk = linalg::dense_block(embed(partial.j2, sites, sub).sparse(), sector).real();
    std::vector<RealMatrix> refined;
    for (const RealMatrix& g : groups) {
      if (g.cols() == 1) {
        refined.push_back(g);
        continue;
      }
      RealMatrix compressed = g.transpose() * jk * g;
      compressed = 0.5 * (compressed + compressed.transpose()).eval();
      linalg::RealSymmetricEigen ce = linalg::symmetric_eigen(compressed);
      for (auto [lo, hi] : linalg::degenerate_groups(ce.values, 1e-8))
        refined.push_back(g * ce.vectors.middleCols(lo, hi - lo));
    }
    groups = std::move(refined);
  }
  RealMatrix ordered(static_cast<Index>(sector.size()), mult);
  {
    Index c = 0;
    for (const RealMatrix& g : groups) {
      ordered.middleCols(c, g.cols()) = g;
      c += g.cols();
    }
  }

  StateVector v = StateVector::Zero(dim);
  for (size_t i = 0; i < sector.size(); ++i) v(sector[i]) = ordered(static_cast<Index>(i), copy);
  fix_sign(v);
  v.normalize();
  for (int step = 0; step < (j.twice() - mj.twice()) / 2; ++step) {
    v = t.jminus.apply(v);
    v.normalize();
  }
  return v;
}

}  // namespace dilute
