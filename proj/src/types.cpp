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

#include "dilute/types.hpp"

#include <cmath>
#include <limits>

namespace dilute {

namespace {

SparseMatrix pruned(SparseMatrix m) {
  m.prune([](Index, Index, const cplx& v) { return std::abs(v) >= kDropTolerance; });
  m.makeCompressed();
  return m;
}

}  // namespace

bool is_normalized(const StateVector& v, double tol) { return std::abs(v.norm() - 1.0) <= tol; }

OperatorMatrix::OperatorMatrix(SparseMatrix m, bool check_hermitian) : m_(pruned(std::move(m))) {
  require(m_.rows() == m_.cols(), ErrorKind::invalid_argument, "operator must be square");
  if (check_hermitian) hermitian_ = hermiticity_error() <= kHermitianTolerance;
}

OperatorMatrix OperatorMatrix::identity(Index dim) {
  SparseMatrix m(dim, dim);
  m.setIdentity();
  return OperatorMatrix(std::move(m), true);
}

OperatorMatrix OperatorMatrix::zero(Index dim) {
  return OperatorMatrix(SparseMatrix(dim, dim), true);
}

OperatorMatrix OperatorMatrix::from_dense(const DenseMatrix& m, bool check_hermitian) {
  return OperatorMatrix(m.sparseView(1.0, kDropTolerance), check_hermitian);
}

OperatorMatrix OperatorMatrix::outer(const StateVector& ket, const StateVector& bra) {
  return from_dense(ket * bra.adjoint());
}

double OperatorMatrix::hermiticity_error() const {
  SparseMatrix diff = m_ - SparseMatrix(m_.adjoint());
  double worst = 0.0;
  for (Index k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

double OperatorMatrix::max_abs() const {
  double worst = 0.0;
  for (Index k = 0; k < m_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m_, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

cplx OperatorMatrix::trace() const {
  cplx t = 0.0;
  for (Index k = 0; k < m_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m_, k); it; ++it)
      if (it.row() == it.col()) t += it.value();
  return t;
}

OperatorMatrix OperatorMatrix::adjoint() const {
  OperatorMatrix out(SparseMatrix(m_.adjoint()));
  out.hermitian_ = hermitian_;
  return out;
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& o) const {
  require(dim() == o.dim(), ErrorKind::invalid_argument, "dimension mismatch in sum");
  OperatorMatrix out(SparseMatrix(m_ + o.m_));
  out.hermitian_ = hermitian_ && o.hermitian_;
  return out;
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& o) const {
  require(dim() == o.dim(), ErrorKind::invalid_argument, "dimension mismatch in difference");
  OperatorMatrix out(SparseMatrix(m_ - o.m_));
  out.hermitian_ = hermitian_ && o.hermitian_;
  return out;
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& o) const {
  require(dim() == o.dim(), ErrorKind::invalid_argument, "dimension mismatch in product");
  return OperatorMatrix(SparseMatrix(m_ * o.m_));
}

OperatorMatrix OperatorMatrix::operator*(cplx s) const {
  OperatorMatrix out(SparseMatrix(m_ * s));
  out.hermitian_ = hermitian_ && s.imag() == 0.0;
  return out;
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& o) {
  *this = *this + o;
  return *this;
}

double SubspaceBasis::orthonormality_error() const {
  if (size() == 0) return 0.0;
  DenseMatrix g = vectors.adjoint() * vectors;
  g -= DenseMatrix::Identity(size(), size());
  return g.cwiseAbs().maxCoeff();
}

HalfInteger HalfInteger::from_double(double value) {
  double twice = 2.0 * value;
  double rounded = std::round(twice);
  require(std::isfinite(value) && std::abs(twice - rounded) < 1e-12, ErrorKind::invalid_argument,
          "spin value is not a half-integer");
  return HalfInteger(static_cast<int>(rounded));
}

std::string HalfInteger::str() const {
  if (twice_ % 2 == 0) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

Index ChainSpec::dim() const {
  Index d = 1;
  for (int i = 0; i < n_sites; ++i) {
    require(d <= std::numeric_limits<Index>::max() / local_dim(), ErrorKind::capacity_exceeded,
            "Hilbert space dimension overflows");
    d *= local_dim();
  }
  return d;
}

void ChainSpec::validate() const {
  require(n_sites >= 1, ErrorKind::invalid_argument, "chain needs at least one site");
  require(local_spin.twice() >= 1, ErrorKind::invalid_argument, "local spin must be at least 1/2");
}

}  // namespace dilute
