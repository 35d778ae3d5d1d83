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


#include "dilute/lie_closure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "dilute/linalg.hpp"
#include "dilute/rng.hpp"

namespace dilute {

namespace {

// Hermitian n x n <-> real n^2 vector, isometric for the Hilbert-Schmidt product.
RealVector to_coords(const DenseMatrix& h) {
  const Index n = h.rows();
  RealVector v(n * n);
  Index k = 0;
  const double s = std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) v(k++) = h(i, i).real();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      v(k++) = s * h(i, j).real();
      v(k++) = s * h(i, j).imag();
    }
  return v;
}

DenseMatrix from_coords(const Eigen::Ref<const RealVector>& v, Index n) {
  DenseMatrix h(n, n);
  Index k = 0;
  const double s = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) h(i, i) = v(k++);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      h(i, j) = cplx(s * v(k), s * v(k + 1));
      h(j, i) = std::conj(h(i, j));
      k += 2;
    }
  return h;
}

DenseMatrix traceless(const DenseMatrix& h) {
  const Index n = h.rows();
  return h - (h.trace() / static_cast<double>(n)) * DenseMatrix::Identity(n, n);
}

class SpanBuilder {
 public:
  SpanBuilder(Index n, double threshold) : n_(n), threshold_(threshold), basis_(n * n, 0) {}

  Index size() const { return basis_.cols(); }
  Index capacity() const { return n_ * n_ - 1; }

  // Adds the new directions among the columns of c; returns their matrix forms.
  std::vector<DenseMatrix> add(RealMatrix c) {
    std::vector<DenseMatrix> added;
    if (c.cols() == 0) return added;
    if (basis_.cols() > 0) {
      c -= basis_ * (basis_.transpose() * c);
      c -= basis_ * (basis_.transpose() * c);
    }
    const Index start = basis_.cols();
    for (Index j = 0; j < c.cols() && basis_.cols() < capacity(); ++j) {
      RealVector v = c.col(j);
      for (int pass = 0; pass < 2; ++pass) {
        const Index fresh = basis_.cols() - start;
        if (fresh > 0) v -= basis_.rightCols(fresh) * (basis_.rightCols(fresh).transpose() * v);
      }
      if (v.norm() <= threshold_) continue;
      // Full reorthogonalization keeps the basis clean over many generations.
      v -= basis_ * (basis_.transpose() * v);
      const double norm = v.norm();
      if (norm <= threshold_) continue;
      v /= norm;
      basis_.conservativeResize(Eigen::NoChange, basis_.cols() + 1);
      basis_.col(basis_.cols() - 1) = v;
      added.push_back(from_coords(v, n_));
    }
    return added;
  }

 private:
  Index n_;
  double threshold_;
  RealMatrix basis_;
};

LieClosureReport close(std::vector<DenseMatrix> gens, const LieClosureOptions& options) {
  require(!gens.empty(), ErrorKind::invalid_argument, "no generators");
  const Index n = gens.front().rows();
  require(n <= kMaxClosureBlock, ErrorKind::capacity_exceeded,
          "Lie closure supports blocks up to dimension " + std::to_string(kMaxClosureBlock));
  if (options.shuffle_seed) {
    RandomStream rng(derive_seed(*options.shuffle_seed, {0x5f1e}));
    for (size_t i = gens.size(); i > 1; --i) std::swap(gens[i - 1], gens[rng.below(i)]);
  }
  std::vector<DenseMatrix> unit;
  for (auto& g : gens) {
    DenseMatrix t = traceless(0.5 * (g + g.adjoint()));
    const double norm = t.norm();
    if (norm > options.threshold) unit.push_back(t / norm);
  }

  LieClosureReport report;
  report.block_dim = n;
  report.target_dimension = n * n - 1;
  SpanBuilder span(n, options.threshold);
  RealMatrix first(n * n, static_cast<Index>(unit.size()));
  for (size_t i = 0; i < unit.size(); ++i) first.col(static_cast<Index>(i)) = to_coords(unit[i]);
  std::vector<DenseMatrix> fresh = span.add(std::move(first));

  const int n_threads = std::max(1, options.n_threads);
  constexpr Index kChunk = 512;
  while (!fresh.empty() && span.size() < span.capacity()) {
    if (report.generations >= options.max_generations) {
      report.dimension = span.size();
      return report;
    }
    ++report.generations;
    const Index total = static_cast<Index>(fresh.size() * unit.size());
    std::vector<DenseMatrix> next;
    for (Index lo = 0; lo < total && span.size() < span.capacity(); lo += kChunk) {
      const Index hi = std::min(total, lo + kChunk);
      RealMatrix cand(n * n, hi - lo);
      auto work = [&](Index from, Index to) {
        for (Index p = from; p < to; ++p) {
          const DenseMatrix& x = fresh[static_cast<size_t>(p / static_cast<Index>(unit.size()))];
          const DenseMatrix& g = unit[static_cast<size_t>(p % static_cast<Index>(unit.size()))];
          DenseMatrix c = cplx(0.0, 1.0) * (g * x - x * g);
          cand.col(p - lo) = to_coords(c);
        }
      };
      if (n_threads == 1) {
        work(lo, hi);
      } else {
        std::vector<std::thread> pool;
        const Index per = (hi - lo + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
          const Index a = lo + t * per, b = std::min(hi, a + per);
          if (a < b) pool.emplace_back(work, a, b);
        }
        for (auto& th : pool) th.join();
      }
      auto added = span.add(std::move(cand));
      for (auto& m : added) next.push_back(std::move(m));
    }
    fresh = std::move(next);
  }
  report.dimension = span.size();
  report.converged = true;
  return report;
}

}  // namespace

LieClosureReport lie_closure_dimension(const std::vector<DenseMatrix>& generators, const LieClosureOptions& options) {
  return close(generators, options);
}

LieClosureReport lie_closure_dimension(const KernelizerBasis& kernelizer, const LieClosureOptions& options) {
  require(kernelizer.target.size() == kernelizer.chain.dim(), ErrorKind::invalid_target, "kernelizer has no target");
  const Index dim = kernelizer.chain.dim();
  require(dim - 1 <= kMaxClosureBlock, ErrorKind::capacity_exceeded,
          "Lie closure supports blocks up to dimension " + std::to_string(kMaxClosureBlock));
  DenseMatrix psi = kernelizer.target;
  DenseMatrix q = linalg::orthogonal_complement(psi / psi.norm());
  std::vector<DenseMatrix> block;
  for (const auto& a : kernelizer.generators) block.push_back(q.adjoint() * (a.sparse() * q));
  return close(std::move(block), options);
}

}  // namespace dilute
