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

#include "dilute/linalg.hpp"

#include <algorithm>
#include <complex>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace dilute::linalg {

namespace {

void check_info(lapack_int info, const char* routine) {
  if (info != 0)
    fail(ErrorKind::solver_failure, std::string(routine) + " returned info=" + std::to_string(info));
}

bool purely_real(const DenseMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (a(i, j).imag() != 0.0) return false;
  return true;
}

struct UnionFind {
  std::vector<Index> parent;
  explicit UnionFind(Index n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), Index{0});
  }
  Index find(Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;
  }
};

}  // namespace

RealSymmetricEigen symmetric_eigen(const RealMatrix& a, bool want_vectors) {
  require(a.rows() == a.cols(), ErrorKind::invalid_argument, "symmetric_eigen needs a square matrix");
  RealSymmetricEigen out;
  const lapack_int n = static_cast<lapack_int>(a.rows());
  out.values.resize(n);
  if (n == 0) return out;
  RealMatrix work = a;
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n, work.data(), n,
                                   out.values.data());
  check_info(info, "dsyevd");
  if (want_vectors) out.vectors = std::move(work);
  return out;
}

HermitianEigen hermitian_eigen(const DenseMatrix& a, bool want_vectors) {
  require(a.rows() == a.cols(), ErrorKind::invalid_argument, "hermitian_eigen needs a square matrix");
  HermitianEigen out;
  if (purely_real(a)) {
    RealSymmetricEigen r = symmetric_eigen(a.real(), want_vectors);
    out.values = std::move(r.values);
    if (want_vectors) out.vectors = r.vectors.cast<cplx>();
    return out;
  }
  const lapack_int n = static_cast<lapack_int>(a.rows());
  out.values.resize(n);
  DenseMatrix work = a;
  lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n, work.data(), n,
                                   out.values.data());
  check_info(info, "zheevd");
  if (want_vectors) out.vectors = std::move(work);
  return out;
}

GeneralEigen general_eigen(const DenseMatrix& a, bool want_vectors) {
  require(a.rows() == a.cols(), ErrorKind::invalid_argument, "general_eigen needs a square matrix");
  GeneralEigen out;
  const lapack_int n = static_cast<lapack_int>(a.rows());
  out.values.resize(n);
  if (n == 0) return out;
  DenseMatrix work = a;
  cplx dummy_left[1];
  if (want_vectors) {
    out.vectors.resize(n, n);
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, out.values.data(),
                                    dummy_left, 1, out.vectors.data(), n);
    check_info(info, "zgeev");
  } else {
    cplx dummy_right[1];
    lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, out.values.data(),
                                    dummy_left, 1, dummy_right, 1);
    check_info(info, "zgeev");
  }
  return out;
}

std::vector<std::pair<Index, Index>> degenerate_groups(const RealVector& sorted, double tol) {
  std::vector<std::pair<Index, Index>> groups;
  Index start = 0;
  for (Index i = 1; i <= sorted.size(); ++i) {
    if (i == sorted.size() || sorted(i) - sorted(i - 1) > tol) {
      groups.emplace_back(start, i);
      start = i;
    }
  }
  return groups;
}

std::vector<std::vector<Index>> connected_blocks(Index dim, const std::vector<const SparseMatrix*>& ops) {
  UnionFind uf(dim);
  for (const SparseMatrix* op : ops) {
    require(op->rows() == dim && op->cols() == dim, ErrorKind::invalid_argument,
            "connected_blocks: dimension mismatch");
    for (Index k = 0; k < op->outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(*op, k); it; ++it) uf.unite(it.row(), it.col());
  }
  std::vector<Index> root_slot(static_cast<size_t>(dim), -1);
  std::vector<std::vector<Index>> blocks;
  for (Index i = 0; i < dim; ++i) {
    Index r = uf.find(i);
    if (root_slot[r] < 0) {
      root_slot[r] = static_cast<Index>(blocks.size());
      blocks.emplace_back();
    }
    blocks[root_slot[r]].push_back(i);
  }
  return blocks;
}

std::vector<std::vector<Index>> merge_blocks(std::vector<std::vector<Index>> blocks,
                                             const std::vector<Index>& support) {
  if (support.empty()) return blocks;
  Index dim = 0;
  for (const auto& b : blocks) dim += static_cast<Index>(b.size());
  std::vector<char> touched_index(static_cast<size_t>(dim), 0);
  for (Index i : support) touched_index[i] = 1;
  std::vector<std::vector<Index>> out;
  std::vector<Index> merged;
  Index merged_slot = -1;
  for (auto& b : blocks) {
    bool touched = std::any_of(b.begin(), b.end(), [&](Index i) { return touched_index[i] != 0; });
    if (!touched) {
      out.push_back(std::move(b));
      continue;
    }
    if (merged_slot < 0) {
      merged_slot = static_cast<Index>(out.size());
      out.emplace_back();
    }
    merged.insert(merged.end(), b.begin(), b.end());
  }
  std::sort(merged.begin(), merged.end());
  out[merged_slot] = std::move(merged);
  return out;
}

DenseMatrix dense_block(const SparseMatrix& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  std::vector<Index> row_pos(static_cast<size_t>(m.rows()), -1);
  for (size_t i = 0; i < rows.size(); ++i) row_pos[rows[i]] = static_cast<Index>(i);
  DenseMatrix out = DenseMatrix::Zero(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) {
    for (SparseMatrix::InnerIterator it(m, cols[j]); it; ++it) {
      Index r = row_pos[it.row()];
      if (r >= 0) out(r, static_cast<Index>(j)) = it.value();
    }
  }
  return out;
}

SparseMatrix sparse_block(const SparseMatrix& m, const std::vector<Index>& idx) {
  std::vector<Index> pos(static_cast<size_t>(m.rows()), -1);
  for (size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = static_cast<Index>(i);
  std::vector<Eigen::Triplet<cplx>> entries;
  for (size_t j = 0; j < idx.size(); ++j)
    for (SparseMatrix::InnerIterator it(m, idx[j]); it; ++it)
      if (pos[it.row()] >= 0) entries.emplace_back(pos[it.row()], static_cast<Index>(j), it.value());
  SparseMatrix out(static_cast<Index>(idx.size()), static_cast<Index>(idx.size()));
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

namespace {

template <class Matrix>
struct SvdResult {
  RealVector s;
  Matrix u;   // thin, when requested
  Matrix vh;  // full, when requested
};

SvdResult<RealMatrix> lapack_svd(RealMatrix a, bool want_u, bool want_v) {
  const lapack_int m = static_cast<lapack_int>(a.rows()), n = static_cast<lapack_int>(a.cols());
  SvdResult<RealMatrix> out;
  out.s.resize(std::min(m, n));
  if (want_u) out.u.resize(m, std::min(m, n));
  if (want_v) out.vh.resize(n, n);
  RealVector superb(std::max<lapack_int>(1, std::min(m, n)));
  lapack_int info = LAPACKE_dgesvd(LAPACK_COL_MAJOR, want_u ? 'S' : 'N', want_v ? 'A' : 'N', m, n, a.data(), m,
                                   out.s.data(), want_u ? out.u.data() : nullptr, std::max<lapack_int>(1, m),
                                   want_v ? out.vh.data() : nullptr, std::max<lapack_int>(1, n), superb.data());
  check_info(info, "dgesvd");
  return out;
}

SvdResult<DenseMatrix> lapack_svd(DenseMatrix a, bool want_u, bool want_v) {
  const lapack_int m = static_cast<lapack_int>(a.rows()), n = static_cast<lapack_int>(a.cols());
  SvdResult<DenseMatrix> out;
  out.s.resize(std::min(m, n));
  if (want_u) out.u.resize(m, std::min(m, n));
  if (want_v) out.vh.resize(n, n);
  RealVector superb(std::max<lapack_int>(1, std::min(m, n)));
  lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, want_u ? 'S' : 'N', want_v ? 'A' : 'N', m, n, a.data(), m,
                                   out.s.data(), want_u ? out.u.data() : nullptr, std::max<lapack_int>(1, m),
                                   want_v ? out.vh.data() : nullptr, std::max<lapack_int>(1, n), superb.data());
  check_info(info, "zgesvd");
  return out;
}

template <class Matrix>
Matrix null_space_impl(const Matrix& a, double rel_cutoff) {
  const Index n = a.cols();
  if (a.rows() == 0 || n == 0) return Matrix::Identity(n, n);
  auto svd = lapack_svd(a, false, true);
  const double cutoff = rel_cutoff * (svd.s.size() > 0 ? svd.s(0) : 0.0);
  Index rank = 0;
  while (rank < svd.s.size() && svd.s(rank) > cutoff) ++rank;
  return svd.vh.bottomRows(n - rank).adjoint();
}

template <class Matrix>
Matrix column_span_impl(const Matrix& a, double cutoff) {
  if (a.cols() == 0 || a.rows() == 0) return Matrix(a.rows(), 0);
  auto svd = lapack_svd(a, true, false);
  Index keep = 0;
  while (keep < svd.s.size() && svd.s(keep) > cutoff) ++keep;
  return svd.u.leftCols(keep);
}

}  // namespace

RealMatrix null_space(const RealMatrix& a, double rel_cutoff) { return null_space_impl(a, rel_cutoff); }
DenseMatrix null_space(const DenseMatrix& a, double rel_cutoff) { return null_space_impl(a, rel_cutoff); }
RealMatrix column_span(const RealMatrix& a, double cutoff) { return column_span_impl(a, cutoff); }
DenseMatrix column_span(const DenseMatrix& a, double cutoff) { return column_span_impl(a, cutoff); }

DenseMatrix orthogonal_complement(const DenseMatrix& q) {
  const Index n = q.rows();
  if (q.cols() == 0) return DenseMatrix::Identity(n, n);
  Eigen::HouseholderQR<DenseMatrix> qr(q);
  DenseMatrix full = qr.householderQ() * DenseMatrix::Identity(n, n);
  return full.rightCols(n - q.cols());
}

RealVector principal_cosines(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() == 0 || b.cols() == 0) return RealVector();
  DenseMatrix m = a.adjoint() * b;
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  return svd.singularValues();
}

}  // namespace dilute::linalg
