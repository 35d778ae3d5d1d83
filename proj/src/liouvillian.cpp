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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SparseLU>
#include <arpack/arpack.hpp>

#include "dilute/linalg.hpp"
#include "dilute/spectral.hpp"

namespace dilute {

namespace {

struct Generator {
  SparseMatrix g;  // -iH - (gamma/2) K, column-major
  std::vector<SparseMatrix> jumps;
  double gamma;
  Index dim;
};

Generator make_generator(const LindbladModel& model) {
  model.validate();
  Generator gen;
  gen.dim = model.dim();
  gen.gamma = model.gamma;
  SparseMatrix k = sum_jump_squares(model.jumps, gen.dim).sparse();
  gen.g = model.hamiltonian.sparse() * cplx(0.0, -1.0) - k * cplx(0.5 * model.gamma, 0.0);
  gen.g.makeCompressed();
  for (const auto& l : model.jumps) gen.jumps.push_back(l.sparse());
  return gen;
}

// Superoperator restricted to the vectorized indices `members` (row-major vec),
// which must span an invariant subspace.
SparseMatrix assemble(const Generator& gen, const std::vector<Index>& members) {
  const Index d = gen.dim;
  std::vector<int> local(static_cast<size_t>(d * d), -1);
  for (size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(members.size() * 16);
  auto push = [&](Index row_vec, int col, cplx v) {
    int r = local[row_vec];
    if (r < 0) fail(ErrorKind::solver_failure, "superoperator block is not invariant");
    t.emplace_back(r, col, v);
  };
  for (size_t c = 0; c < members.size(); ++c) {
    const int col = static_cast<int>(c);
    const Index k = members[c] / d, l = members[c] % d;
    for (SparseMatrix::InnerIterator it(gen.g, k); it; ++it) push(it.row() * d + l, col, it.value());
    for (SparseMatrix::InnerIterator it(gen.g, l); it; ++it) push(k * d + it.row(), col, std::conj(it.value()));
    for (const SparseMatrix& jump : gen.jumps)
      for (SparseMatrix::InnerIterator a(jump, k); a; ++a)
        for (SparseMatrix::InnerIterator b(jump, l); b; ++b)
          push(a.row() * d + b.row(), col, gen.gamma * a.value() * std::conj(b.value()));
  }
  const Index n = static_cast<Index>(members.size());
  SparseMatrix out(n, n);
  out.setFromTriplets(t.begin(), t.end());
  out.prune([](Index, Index, const cplx& v) { return std::abs(v) >= kDropTolerance; });
  out.makeCompressed();
  return out;
}

// Invariant operator-space components: pairs of Hilbert blocks linked by the jumps.
std::vector<std::vector<Index>> operator_components(const LindbladModel& model) {
  const Index d = model.dim();
  SparseMatrix k = sum_jump_squares(model.jumps, d).sparse();
  std::vector<const SparseMatrix*> ops{&model.hamiltonian.sparse(), &k};
  std::vector<std::vector<Index>> blocks;
  std::vector<Index> block_of(static_cast<size_t>(d));
  // Merge Hilbert blocks until each jump maps a block into a single block.
  std::vector<SparseMatrix> glue;
  for (;;) {
    std::vector<const SparseMatrix*> all = ops;
    for (const auto& g : glue) all.push_back(&g);
    blocks = linalg::connected_blocks(d, all);
    for (size_t b = 0; b < blocks.size(); ++b)
      for (Index i : blocks[b]) block_of[i] = static_cast<Index>(b);
    std::vector<Eigen::Triplet<cplx>> extra;
    for (const auto& l : model.jumps) {
      std::vector<Index> image(blocks.size(), -1);
      const SparseMatrix& m = l.sparse();
      for (Index c = 0; c < m.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
          Index src = block_of[c], dst = block_of[it.row()];
          if (image[src] < 0) image[src] = dst;
          else if (image[src] != dst) extra.emplace_back(blocks[image[src]][0], blocks[dst][0], 1.0);
        }
    }
    if (extra.empty()) break;
    SparseMatrix g(d, d);
    g.setFromTriplets(extra.begin(), extra.end());
    glue.push_back(std::move(g));
  }
  const Index nb = static_cast<Index>(blocks.size());
  std::vector<std::vector<Index>> images;
  for (const auto& l : model.jumps) {
    std::vector<Index> image(static_cast<size_t>(nb), -1);
    const SparseMatrix& m = l.sparse();
    for (Index c = 0; c < m.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(m, c); it; ++it) image[block_of[c]] = block_of[it.row()];
    images.push_back(std::move(image));
  }
  std::vector<Index> parent(static_cast<size_t>(nb * nb));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& image : images)
    for (Index b = 0; b < nb; ++b)
      for (Index c = 0; c < nb; ++c)
        if (image[b] >= 0 && image[c] >= 0) {
          Index x = find(b * nb + c), y = find(image[b] * nb + image[c]);
          if (x != y) parent[std::max(x, y)] = std::min(x, y);
        }
  std::vector<Index> slot(static_cast<size_t>(nb * nb), -1);
  std::vector<std::vector<Index>> comps;
  for (Index p = 0; p < nb * nb; ++p) {
    Index r = find(p);
    if (slot[r] < 0) {
      slot[r] = static_cast<Index>(comps.size());
      comps.emplace_back();
    }
    const auto& rows = blocks[p / nb];
    const auto& cols = blocks[p % nb];
    auto& comp = comps[slot[r]];
    for (Index i : rows)
      for (Index j : cols) comp.push_back(i * d + j);
  }
  for (auto& c : comps) std::sort(c.begin(), c.end());
  return comps;
}

// Eigenvalues nearest sigma via shift-invert Arnoldi.
std::vector<cplx> arnoldi_near(const SparseMatrix& a, cplx sigma, int nev, double tol) {
  const a_int n = static_cast<a_int>(a.rows());
  SparseMatrix shifted = a;
  for (Index i = 0; i < a.rows(); ++i) shifted.coeffRef(i, i) -= sigma;
  shifted.makeCompressed();
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) fail(ErrorKind::solver_failure, "sparse LU of the shifted superoperator failed");

  nev = std::max(1, std::min<int>(nev, n - 2));
  const a_int ncv = std::min<a_int>(n, std::max<a_int>(2 * nev + 1, 32));
  const a_int lworkl = 3 * ncv * ncv + 5 * ncv;
  std::vector<cplx> resid(n, cplx(1.0, 0.0)), v(static_cast<size_t>(n) * ncv), workd(3 * static_cast<size_t>(n)),
      workl(lworkl);
  std::vector<double> rwork(ncv);
  a_int iparam[11] = {0}, ipntr[14] = {0};
  iparam[0] = 1;
  iparam[2] = 3000;
  iparam[6] = 1;
  // Deterministic, generic start vector.
  for (a_int i = 0; i < n; ++i) resid[i] = cplx(1.0 + 0.5 * std::sin(0.7 * i), 0.3 * std::cos(1.3 * i));
  a_int ido = 0, info = 1;
  using VecMap = Eigen::Map<Eigen::VectorXcd>;
  for (;;) {
    arpack::naupd(ido, arpack::bmat::identity, n, arpack::which::largest_magnitude, nev, tol, resid.data(), ncv,
                  v.data(), n, iparam, ipntr, workd.data(), workl.data(), lworkl, rwork.data(), info);
    if (ido != -1 && ido != 1) break;
    VecMap x(workd.data() + ipntr[0] - 1, n);
    VecMap y(workd.data() + ipntr[1] - 1, n);
    y = lu.solve(Eigen::VectorXcd(x));
  }
  if (info < 0 || info == 1)
    fail(ErrorKind::solver_failure, "Arnoldi did not converge (info=" + std::to_string(info) +
                                        ", converged " + std::to_string(iparam[4]) + " of " + std::to_string(nev) + ")");
  std::vector<a_int> select(ncv);
  std::vector<cplx> d(nev + 1), z(1), workev(2 * ncv);
  a_int info2 = 0;
  arpack::neupd(0, arpack::howmny::ritz_vectors, select.data(), d.data(), z.data(), 1, sigma, workev.data(),
                arpack::bmat::identity, n, arpack::which::largest_magnitude, nev, tol, resid.data(), ncv, v.data(), n,
                iparam, ipntr, workd.data(), workl.data(), lworkl, rwork.data(), info2);
  if (info2 != 0) fail(ErrorKind::solver_failure, "Arnoldi extraction failed (info=" + std::to_string(info2) + ")");
  std::vector<cplx> out;
  // Regular mode on OP = (A - sigma)^-1 returns eigenvalues nu of OP; lambda = sigma + 1/nu.
  for (a_int i = 0; i < iparam[4]; ++i) out.push_back(sigma + 1.0 / d[i]);
  return out;
}

}  // namespace

SparseMatrix liouvillian_superoperator(const LindbladModel& model) {
  Generator gen = make_generator(model);
  std::vector<Index> all(static_cast<size_t>(gen.dim * gen.dim));
  std::iota(all.begin(), all.end(), Index{0});
  return assemble(gen, all);
}

DenseMatrix apply_liouvillian(const LindbladModel& model, const DenseMatrix& rho) {
  model.validate();
  require(rho.rows() == model.dim() && rho.cols() == model.dim(), ErrorKind::invalid_argument,
          "density matrix dimension mismatch");
  const SparseMatrix& h = model.hamiltonian.sparse();
  DenseMatrix out = cplx(0.0, -1.0) * (h * rho - rho * h);
  for (const auto& l : model.jumps) {
    const SparseMatrix& m = l.sparse();
    SparseMatrix k = SparseMatrix(m.adjoint()) * m;
    out += model.gamma * (m * rho * SparseMatrix(m.adjoint()) - 0.5 * (k * rho + rho * k));
  }
  return out;
}

Eigen::VectorXcd liouvillian_spectrum(const LindbladModel& model) {
  Generator gen = make_generator(model);
  std::vector<cplx> values;
  for (const auto& comp : operator_components(model)) {
    DenseMatrix block = DenseMatrix(assemble(gen, comp));
    Eigen::VectorXcd ev = linalg::general_eigen(block).values;
    values.insert(values.end(), ev.data(), ev.data() + ev.size());
  }
  return Eigen::Map<Eigen::VectorXcd>(values.data(), static_cast<Index>(values.size()));
}

GapReport liouvillian_gap(const LindbladModel& model, const LiouvillianOptions& options, const TargetState* target) {
  model.validate();
  const Index d = model.dim();
  require(d <= options.iterative_max_dim, ErrorKind::capacity_exceeded,
          "Hilbert dimension " + std::to_string(d) + " exceeds the superoperator limit");
  GapReport report;
  report.method = GapMethod::full_liouvillian;
  const double zero_tol = model.gamma > 0.0 ? kSteadyStateTolerance * model.gamma : 1e-10;
  const bool dense_all = d <= options.dense_max_dim;
  bool partial = false;

  Generator gen = make_generator(model);
  std::vector<cplx> values;
  for (const auto& comp : operator_components(model)) {
    SparseMatrix block = assemble(gen, comp);
    if (dense_all || block.rows() <= options.dense_block_max) {
      Eigen::VectorXcd ev = linalg::general_eigen(DenseMatrix(block)).values;
      values.insert(values.end(), ev.data(), ev.data() + ev.size());
    } else {
      partial = true;
      const cplx sigma(1e-4 * std::max(model.gamma, 1e-8), 0.0);
      auto near = arnoldi_near(block, sigma, options.n_eigenvalues, options.arnoldi_tol);
      values.insert(values.end(), near.begin(), near.end());
    }
  }

  int zero = 0;
  int imaginary = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (const cplx& v : values) {
    if (std::abs(v) <= zero_tol) {
      ++zero;
      continue;
    }
    if (std::abs(v.real()) <= zero_tol) ++imaginary;
    gap = std::min(gap, std::abs(v.real()));
  }
  if (imaginary > 0)
    report.warnings.push_back(std::to_string(imaginary) + " purely imaginary eigenvalue(s); gap reported as 0");
  if (partial) {
    if (target) {
      GapReport eff = effective_hamiltonian_gap(model, *target);
      gap = std::min(gap, eff.gap.value_or(gap));
    } else {
      report.warnings.push_back("iterative path only resolves eigenvalues near zero; pass a target to include "
                                "the target coherences");
    }
  }
  report.steady_state_count = zero;
  if (zero == 0) report.warnings.push_back("no zero eigenvalue found");
  report.gap = (zero > 1 || !std::isfinite(gap)) ? 0.0 : gap;
  return report;
}

}  // namespace dilute
