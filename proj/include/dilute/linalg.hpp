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

// Dense kernels backed by LAPACK, plus block detection on sparsity patterns.

#ifndef DILUTE_LINALG_HPP
#define DILUTE_LINALG_HPP

#include <utility>
#include <vector>

#include "dilute/types.hpp"

namespace dilute::linalg {

struct HermitianEigen {
  RealVector values;     // ascending
  DenseMatrix vectors;   // columns, empty if not requested
};

struct RealSymmetricEigen {
  RealVector values;
  RealMatrix vectors;
};

struct GeneralEigen {
  Eigen::VectorXcd values;
  DenseMatrix vectors;  // right eigenvectors, unit 2-norm columns
};

// Uses the real symmetric driver when the input has no imaginary part.
HermitianEigen hermitian_eigen(const DenseMatrix& a, bool want_vectors = true);
RealSymmetricEigen symmetric_eigen(const RealMatrix& a, bool want_vectors = true);
GeneralEigen general_eigen(const DenseMatrix& a, bool want_vectors = false);

// Half-open index ranges [first, second) of a sorted list whose consecutive gaps are <= tol.
std::vector<std::pair<Index, Index>> degenerate_groups(const RealVector& sorted, double tol);

// Connected components of the union of the sparsity patterns, each sorted ascending;
// components are ordered by their smallest index.
std::vector<std::vector<Index>> connected_blocks(Index dim, const std::vector<const SparseMatrix*>& ops);
// Merge every block that touches one of `support` into a single block.
std::vector<std::vector<Index>> merge_blocks(std::vector<std::vector<Index>> blocks,
                                             const std::vector<Index>& support);

DenseMatrix dense_block(const SparseMatrix& m, const std::vector<Index>& rows,
                        const std::vector<Index>& cols);
inline DenseMatrix dense_block(const SparseMatrix& m, const std::vector<Index>& idx) {
  return dense_block(m, idx, idx);
}
SparseMatrix sparse_block(const SparseMatrix& m, const std::vector<Index>& idx);

// Orthonormal basis of the null space, singular values <= rel_cutoff * sigma_max count as zero.
RealMatrix null_space(const RealMatrix& a, double rel_cutoff = 1e-10);
DenseMatrix null_space(const DenseMatrix& a, double rel_cutoff = 1e-10);
// Orthonormal basis of the column span; singular values <= cutoff (absolute) are dropped.
RealMatrix column_span(const RealMatrix& a, double cutoff);
DenseMatrix column_span(const DenseMatrix& a, double cutoff);
// Orthonormal basis of the orthogonal complement of the column span of q (q orthonormal).
DenseMatrix orthogonal_complement(const DenseMatrix& q);
// Singular values of a^dagger b for orthonormal a, b. Cosines of principal angles.
RealVector principal_cosines(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace dilute::linalg

#endif  // DILUTE_LINALG_HPP
