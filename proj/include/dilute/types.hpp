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

#ifndef DILUTE_TYPES_HPP
#define DILUTE_TYPES_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dilute/error.hpp"

namespace dilute {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using RealVector = Eigen::VectorXd;

// Dense complex amplitudes. Normalization is a caller contract, see is_normalized().
using StateVector = Eigen::VectorXcd;

inline constexpr double kDropTolerance = 1e-14;
inline constexpr double kHermitianTolerance = 1e-12;

bool is_normalized(const StateVector& v, double tol = 1e-10);

// Sparse square matrix. Entries below kDropTolerance are dropped on construction.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  explicit OperatorMatrix(SparseMatrix m, bool check_hermitian = false);

  static OperatorMatrix identity(Index dim);
  static OperatorMatrix zero(Index dim);
  static OperatorMatrix from_dense(const DenseMatrix& m, bool check_hermitian = false);
  // |ket><bra|
  static OperatorMatrix outer(const StateVector& ket, const StateVector& bra);

  Index dim() const { return m_.rows(); }
  Index nonzeros() const { return m_.nonZeros(); }
  const SparseMatrix& sparse() const { return m_; }
  DenseMatrix dense() const { return DenseMatrix(m_); }

  bool hermitian_hint() const { return hermitian_; }
  // Max entry of |A - A^dagger|.
  double hermiticity_error() const;
  // Max |entry|.
  double max_abs() const;
  double hs_norm() const { return m_.norm(); }
  cplx trace() const;

  OperatorMatrix adjoint() const;
  StateVector apply(const StateVector& v) const { return m_ * v; }

  OperatorMatrix operator+(const OperatorMatrix& o) const;
  OperatorMatrix operator-(const OperatorMatrix& o) const;
  OperatorMatrix operator*(const OperatorMatrix& o) const;
  OperatorMatrix operator*(cplx s) const;
  OperatorMatrix& operator+=(const OperatorMatrix& o);

 private:
  SparseMatrix m_;
  bool hermitian_ = false;
};

inline OperatorMatrix operator*(cplx s, const OperatorMatrix& a) { return a * s; }

// Orthonormal columns spanning a subspace of a dim_ambient-dimensional space.
struct SubspaceBasis {
  Index dim_ambient = 0;
  DenseMatrix vectors;  // dim_ambient x size

  Index size() const { return vectors.cols(); }
  DenseMatrix projector() const { return vectors * vectors.adjoint(); }
  double orthonormality_error() const;
};

// Spin quantum numbers are stored as twice their value.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;
  static constexpr HalfInteger from_twice(int twice) { return HalfInteger(twice); }
  static HalfInteger from_double(double value);

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return twice_ / 2.0; }
  constexpr bool operator==(const HalfInteger&) const = default;
  constexpr auto operator<=>(const HalfInteger&) const = default;
  std::string str() const;

 private:
  constexpr explicit HalfInteger(int twice) : twice_(twice) {}
  int twice_ = 0;
};

enum class Boundary { periodic, open };

struct ChainSpec {
  int n_sites = 0;
  HalfInteger local_spin = HalfInteger::from_twice(1);
  Boundary boundary = Boundary::periodic;

  int local_dim() const { return local_spin.twice() + 1; }
  Index dim() const;
  void validate() const;
};

}  // namespace dilute

#endif  // DILUTE_TYPES_HPP
