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


#include "dilute/steerability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <unsupported/Eigen/KroneckerProduct>

#include "dilute/linalg.hpp"
#include "dilute/rng.hpp"
#include "dilute/spectral.hpp"
#include "dilute/spin_algebra.hpp"

namespace dilute {

namespace {

Index ipow(Index base, int exp) {
  Index r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void fix_phase(StateVector& v) {
  Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (std::abs(v(k)) > 0.0) v *= std::abs(v(k)) / v(k);
}

}  // namespace

DenseMatrix restrict_to_link(const OperatorMatrix& op, int link, const ChainSpec& chain) {
  chain.validate();
  require(op.dim() == chain.dim(), ErrorKind::invalid_argument, "operator dimension mismatch");
  const std::vector<int> sites = link_sites(link, chain);
  const int n = chain.n_sites;
  const Index d = chain.local_dim();
  auto split = [&](Index idx) {
    std::vector<int> digits(n + 1);
    for (int site = n; site >= 1; --site) {
      digits[site] = static_cast<int>(idx % d);
      idx /= d;
    }
    Index a = digits[sites[0]] * d + digits[sites[1]];
    Index r = 0;
    for (int site = 1; site <= n; ++site)
      if (site != sites[0] && site != sites[1]) r = r * d + digits[site];
    return std::pair<Index, Index>{a, r};
  };
  DenseMatrix l = DenseMatrix::Zero(d * d, d * d);
  const SparseMatrix& m = op.sparse();
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      auto [a, ra] = split(it.row());
      auto [b, rb] = split(it.col());
      if (ra == rb) l(a, b) += it.value();
    }
  return l / static_cast<double>(ipow(d, n - 2));
}

JumpValidity validate_jumps(const std::vector<OperatorMatrix>& jumps, const TargetState& target, int link,
                            const ChainSpec& chain) {
  HotColdSplit split = hot_cold_split(target, link, chain);
  const Index d2 = split.reduced_density.rows();
  JumpValidity out;
  out.cold_dim = split.cold.size();
  std::vector<DenseMatrix> local;
  for (const auto& jump : jumps) {
    local.push_back(restrict_to_link(jump, link, chain));
    OperatorMatrix back = embed(OperatorMatrix::from_dense(local.back()), link_sites(link, chain), chain);
    out.support_residual = std::max(out.support_residual, (jump - back).max_abs());
  }
  out.supported_on_link = out.support_residual <= kJumpResidualTolerance;

  for (const auto& l : local) out.nilpotency_residual = std::max(out.nilpotency_residual, (l * l).cwiseAbs().maxCoeff());
  out.nilpotent = out.nilpotency_residual <= kJumpResidualTolerance;

  DenseMatrix stacked(static_cast<Index>(local.size()) * d2, d2);
  for (size_t j = 0; j < local.size(); ++j) stacked.middleRows(static_cast<Index>(j) * d2, d2) = local[j];
  DenseMatrix kernel = local.empty() ? DenseMatrix(DenseMatrix::Identity(d2, d2)) : linalg::null_space(stacked);
  out.kernel_dim = kernel.cols();
  if (kernel.cols() == split.cold.size()) {
    RealVector cos = linalg::principal_cosines(kernel, split.cold.vectors);
    out.kernel_residual = cos.size() > 0 ? 1.0 - cos.minCoeff() : 0.0;
  } else {
    out.kernel_residual = 1.0;
  }
  out.kernel_matches_cold = out.kernel_residual <= kAngleTolerance;

  DenseMatrix p_hot = split.hot.projector();
  for (const auto& l : local) out.image_residual = std::max(out.image_residual, (p_hot * l).cwiseAbs().maxCoeff());
  out.image_in_cold = out.image_residual <= kJumpResidualTolerance;
  return out;
}

bool necessary_condition_hot(const TargetState& target, int link, const ChainSpec& chain) {
  return hot_cold_split(target, link, chain).hot.size() >= 1;
}

std::vector<OperatorMatrix> cooling_jumps(const TargetState& target, int link, const ChainSpec& chain) {
  HotColdSplit split = hot_cold_split(target, link, chain);
  std::vector<OperatorMatrix> jumps;
  const Index n_cold = split.cold.size();
  if (n_cold == 0) return jumps;
  for (Index j = 0; j < split.hot.size(); ++j)
    jumps.push_back(link_transition(split.cold.vectors.col(j % n_cold), split.hot.vectors.col(j), link, chain));
  return jumps;
}

std::vector<DenseMatrix> hermitian_operator_basis(int d) {
  require(d >= 1, ErrorKind::invalid_argument, "basis dimension must be positive");
  std::vector<DenseMatrix> basis;
  basis.push_back(DenseMatrix::Identity(d, d) / std::sqrt(static_cast<double>(d)));
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      DenseMatrix s = DenseMatrix::Zero(d, d);
      s(j, k) = s(k, j) = r2;
      basis.push_back(s);
      DenseMatrix a = DenseMatrix::Zero(d, d);
      a(j, k) = cplx(0.0, -r2);
      a(k, j) = cplx(0.0, r2);
      basis.push_back(a);
    }
  for (int l = 1; l < d; ++l) {
    DenseMatrix z = DenseMatrix::Zero(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) z(j, j) = norm;
    z(l, l) = -l * norm;
    basis.push_back(z);
  }
  return basis;
}

std::vector<OperatorMatrix> KernelizerBasis::local_generators(int link) const {
  std::vector<OperatorMatrix> out;
  for (size_t i = 0; i < generators.size(); ++i)
    if (generator_link[i] == link) out.push_back(generators[i]);
  return out;
}

namespace {

struct PauliString {
  SparseMatrix op;  // embedded, unit Hilbert-Schmidt norm
  std::vector<int> sites;
};

std::vector<PauliString> link_strings(const ChainSpec& chain, const std::vector<int>& links) {
  const int n = chain.n_sites;
  const Index d = chain.local_dim();
  const Index dim = chain.dim();
  const auto basis = hermitian_operator_basis(static_cast<int>(d));
  std::vector<PauliString> out;
  SparseMatrix id(dim, dim);
  id.setIdentity();
  out.push_back({id / std::sqrt(static_cast<double>(dim)), {}});
  const double single_scale = 1.0 / std::sqrt(static_cast<double>(ipow(d, n - 1)));
  for (int s = 1; s <= n; ++s)
    for (size_t a = 1; a < basis.size(); ++a)
      out.push_back({embed(OperatorMatrix::from_dense(basis[a]), {s}, chain).sparse() * single_scale, {s}});
  const double pair_scale = 1.0 / std::sqrt(static_cast<double>(ipow(d, n - 2)));
  for (int link : links) {
    std::vector<int> sites = link_sites(link, chain);
    for (size_t a = 1; a < basis.size(); ++a)
      for (size_t b = 1; b < basis.size(); ++b) {
        DenseMatrix ab = Eigen::kroneckerProduct(basis[a], basis[b]);
        out.push_back({embed(OperatorMatrix::from_dense(ab), sites, chain).sparse() * pair_scale, sites});
      }
  }
  return out;
}

OperatorMatrix combine(const std::vector<PauliString>& strings, const RealVector& coeff) {
  SparseMatrix sum(strings.front().op.rows(), strings.front().op.cols());
  for (Index k = 0; k < coeff.size(); ++k)
    if (std::abs(coeff(k)) > kDropTolerance) sum += strings[static_cast<size_t>(k)].op * cplx(coeff(k), 0.0);
  SparseMatrix h = 0.5 * (sum + SparseMatrix(sum.adjoint()));
  return OperatorMatrix(h, true);
}

}  // namespace

KernelizerBasis build_kernelizer(const TargetState& target, const ChainSpec& chain, const KernelizerOptions& options) {
  chain.validate();
  const Index dim = chain.dim();
  require(dim <= kMaxKernelizerDim, ErrorKind::capacity_exceeded,
          "kernelizer dense path supports Hilbert dimensions up to " + std::to_string(kMaxKernelizerDim));
  require(target.vector.size() == dim && is_normalized(target.vector), ErrorKind::invalid_target,
          "target must be a normalized state of the chain");

  KernelizerBasis out;
  out.chain = chain;
  out.target = target.vector;
  out.links = chain_links(chain);
  const auto strings = link_strings(chain, out.links);
  const Index n_strings = static_cast<Index>(strings.size());

  // Column k holds (Re, Im) of B_k |psi>; real coefficients c with sum c_k B_k |psi> = 0.
  RealMatrix constraint(2 * dim, n_strings);
  for (Index k = 0; k < n_strings; ++k) {
    StateVector v = strings[static_cast<size_t>(k)].op * target.vector;
    constraint.col(k).head(dim) = v.real();
    constraint.col(k).tail(dim) = v.imag();
  }

  RealMatrix local_coeffs(n_strings, 0);
  for (int link : out.links) {
    std::vector<int> sites = link_sites(link, chain);
    std::vector<Index> cols;
    for (Index k = 0; k < n_strings; ++k) {
      const auto& s = strings[static_cast<size_t>(k)].sites;
      bool inside = std::all_of(s.begin(), s.end(), [&](int x) { return x == sites[0] || x == sites[1]; });
      if (inside) cols.push_back(k);
    }
    RealMatrix sub(2 * dim, static_cast<Index>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) sub.col(static_cast<Index>(j)) = constraint.col(cols[j]);
    RealMatrix null = linalg::null_space(sub, options.rel_cutoff);
    RealMatrix full = RealMatrix::Zero(n_strings, null.cols());
    for (size_t j = 0; j < cols.size(); ++j) full.row(cols[j]) = null.row(static_cast<Index>(j));
    for (Index g = 0; g < full.cols(); ++g) {
      out.generators.push_back(combine(strings, full.col(g)));
      out.generator_link.push_back(link);
    }
    out.local_dims.push_back(full.cols());
    RealMatrix grown(n_strings, local_coeffs.cols() + full.cols());
    grown << local_coeffs, full;
    local_coeffs = std::move(grown);
  }

  RealMatrix local_span = linalg::column_span(local_coeffs, 1e-8);
  out.dimension = local_span.cols();
  if (options.cross_link) {
    RealMatrix global = linalg::null_space(constraint, options.rel_cutoff);
    RealMatrix residual = global - local_span * (local_span.transpose() * global);
    RealMatrix extra = linalg::column_span(residual, 0.5);
    for (Index g = 0; g < extra.cols(); ++g) {
      out.generators.push_back(combine(strings, extra.col(g)));
      out.generator_link.push_back(0);
    }
    out.dimension = global.cols();
  }
  return out;
}

FlowCheck necessary_condition_flow(const KernelizerBasis& kernelizer, const TargetState& target, int link,
                                   std::uint64_t seed) {
  const ChainSpec& chain = kernelizer.chain;
  const Index dim = chain.dim();
  require(target.vector.size() == dim, ErrorKind::invalid_target, "target dimension mismatch");
  FlowCheck out;
  const auto& gens = kernelizer.generators;
  constexpr int kMaxRounds = 4;
  std::vector<DenseMatrix> common;
  long counter = 0;

  std::function<void(const DenseMatrix&, int)> refine = [&](const DenseMatrix& w, int round) {
    const Index k = w.cols();
    std::vector<DenseMatrix> compressed;
    bool is_common = true;
    for (const auto& a : gens) {
      DenseMatrix aw = a.sparse() * w;
      DenseMatrix b = w.adjoint() * aw;
      const double leak = (aw - w * b).norm();
      const double spread = (b - (b.trace() / static_cast<double>(k)) * DenseMatrix::Identity(k, k)).norm();
      if (leak > kEigenResidualTolerance || spread > kEigenResidualTolerance) is_common = false;
      compressed.push_back(std::move(b));
      if (!is_common && k == 1) return;
    }
    if (is_common) {
      common.push_back(w);
      return;
    }
    if (round >= kMaxRounds) {
      out.warnings.push_back("unresolved degenerate subspace of dimension " + std::to_string(k));
      return;
    }
    RandomStream rng(derive_seed(seed, {static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(counter++)}));
    DenseMatrix g = DenseMatrix::Zero(k, k);
    for (const auto& b : compressed) g += rng.normal() * b;
    g = 0.5 * (g + g.adjoint()).eval();
    linalg::HermitianEigen es = linalg::hermitian_eigen(g);
    const double tol = 1e-8 * std::max(1.0, es.values.cwiseAbs().maxCoeff());
    for (auto [lo, hi] : linalg::degenerate_groups(es.values, tol)) refine(w * es.vectors.middleCols(lo, hi - lo), round + 1);
  };

  if (!gens.empty()) {
    // First round on the full space through the sparse generators.
    RandomStream rng(derive_seed(seed, {0xf10eu}));
    SparseMatrix g(dim, dim);
    for (const auto& a : gens) g += a.sparse() * cplx(rng.normal(), 0.0);
    DenseMatrix gd = DenseMatrix(g);
    gd = 0.5 * (gd + gd.adjoint()).eval();
    linalg::HermitianEigen es = linalg::hermitian_eigen(gd);
    const double tol = 1e-8 * std::max(1.0, es.values.cwiseAbs().maxCoeff());
    for (auto [lo, hi] : linalg::degenerate_groups(es.values, tol)) refine(es.vectors.middleCols(lo, hi - lo), 1);
  } else {
    common.push_back(DenseMatrix::Identity(dim, dim));
  }
  out.common_eigenspaces = static_cast<int>(common.size());

  const DenseMatrix p_hot = hot_projector(target, link, chain).dense();
  const StateVector& psi = target.vector;
  for (const DenseMatrix& c : common) {
    DenseMatrix rest = linalg::column_span(DenseMatrix(c - psi * (psi.adjoint() * c)), 0.5);
    if (rest.cols() == 0) continue;
    DenseMatrix outside = rest.adjoint() * (rest - p_hot * rest);
    outside = 0.5 * (outside + outside.adjoint()).eval();
    linalg::HermitianEigen es = linalg::hermitian_eigen(outside);
    for (Index i = 0; i < es.values.size(); ++i) {
      if (es.values(i) <= kEigenResidualTolerance) continue;
      StateVector wv = rest * es.vectors.col(i);
      wv.normalize();
      fix_phase(wv);
      out.witnesses.push_back(std::move(wv));
    }
  }
  out.passes = out.witnesses.empty();
  return out;
}

OperatorMatrix sample_delta_h(const KernelizerBasis& kernelizer, std::uint64_t seed, double norm) {
  require(!kernelizer.generators.empty(), ErrorKind::invalid_argument, "kernelizer has no generators");
  require(norm >= 0.0 && std::isfinite(norm), ErrorKind::invalid_argument, "norm must be nonnegative");
  RandomStream rng(derive_seed(seed, {0xde17a}));
  const Index dim = kernelizer.generators.front().dim();
  SparseMatrix sum(dim, dim);
  for (const auto& a : kernelizer.generators) sum += a.sparse() * cplx(rng.normal(), 0.0);
  const double current = sum.norm();
  require(current > 0.0, ErrorKind::invalid_argument, "degenerate kernelizer sample");
  SparseMatrix scaled = sum * cplx(norm / current, 0.0);
  SparseMatrix h = 0.5 * (scaled + SparseMatrix(scaled.adjoint()));
  return OperatorMatrix(h, true);
}

}  // namespace dilute
