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


// Reference computations for tests, written against plain dense matrices so they
// share no code path with the library beyond the operators they are handed.

#ifndef DILUTE_TESTS_ORACLES_HPP
#define DILUTE_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Spin-s ladder and z matrices in the basis m = s, s-1, ..., -s.
struct Spin {
  Mat plus, minus, z, x, y;
};

inline Spin spin(double s) {
  const int d = static_cast<int>(std::lround(2 * s)) + 1;
  Spin out;
  out.plus = Mat::Zero(d, d);
  out.z = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = s - k;
    out.z(k, k) = m;
    if (k > 0) out.plus(k - 1, k) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  out.minus = out.plus.adjoint();
  out.x = 0.5 * (out.plus + out.minus);
  out.y = cplx(0, -0.5) * (out.plus - out.minus);
  return out;
}

// Operator `op` on consecutive sites starting at `first` (0-based) of an n-site open register.
inline Mat on_sites(const Mat& op, int first, int n, int d) {
  const int width = static_cast<int>(std::lround(std::log(static_cast<double>(op.rows())) / std::log(d)));
  Mat out = Mat::Identity(1, 1);
  for (int site = 0; site < n;) {
    if (site == first) {
      out = kron(out, op);
      site += width;
    } else {
      out = kron(out, Mat::Identity(d, d));
      ++site;
    }
  }
  return out;
}

// Two-site S1.S2 total-spin squared, (S1 + S2)^2, on d^2 dimensions.
inline Mat pair_j2(double s) {
  const Spin a = spin(s);
  const int d = static_cast<int>(a.z.rows());
  const Mat id = Mat::Identity(d, d);
  Mat jx = kron(a.x, id) + kron(id, a.x), jy = kron(a.y, id) + kron(id, a.y), jz = kron(a.z, id) + kron(id, a.z);
  return jx * jx + jy * jy + jz * jz;
}

// Projector onto total spin j of two spins-s via the J^2 eigenvalue j(j+1).
inline Mat pair_projector(double s, double j) {
  Eigen::SelfAdjointEigenSolver<Mat> es(pair_j2(s));
  Mat p = Mat::Zero(es.eigenvectors().rows(), es.eigenvectors().rows());
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    if (std::abs(es.eigenvalues()(k) - j * (j + 1)) < 1e-8) p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
  return p;
}

inline Mat lindblad_rhs(const Mat& h, const std::vector<Mat>& jumps, double gamma, const Mat& rho) {
  Mat out = cplx(0, -1) * (h * rho - rho * h);
  for (const Mat& l : jumps) {
    const Mat ldl = l.adjoint() * l;
    out += gamma * (l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

// Fixed-step RK4 for the master equation; returns <target|rho(t)|target> on `grid`.
inline std::vector<double> master_equation_overlaps(const Mat& h, const std::vector<Mat>& jumps, double gamma,
                                                    const Vec& psi0, const Vec& target, const std::vector<double>& grid,
                                                    double max_step) {
  Mat rho = psi0 * psi0.adjoint();
  std::vector<double> out;
  double t = 0.0;
  for (double tg : grid) {
    const int steps = static_cast<int>(std::ceil((tg - t) / max_step - 1e-12));
    if (steps > 0) {
      const double dt = (tg - t) / steps;
      for (int k = 0; k < steps; ++k) {
        Mat k1 = lindblad_rhs(h, jumps, gamma, rho);
        Mat k2 = lindblad_rhs(h, jumps, gamma, rho + 0.5 * dt * k1);
        Mat k3 = lindblad_rhs(h, jumps, gamma, rho + 0.5 * dt * k2);
        Mat k4 = lindblad_rhs(h, jumps, gamma, rho + dt * k3);
        rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      t = tg;
    }
    out.push_back((target.adjoint() * rho * target)(0, 0).real());
  }
  return out;
}

// Smallest eigenvalues with multiplicity count below tol.
inline int null_dimension(const Mat& h, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  int n = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    if (std::abs(es.eigenvalues()(k)) <= tol) ++n;
  return n;
}

}  // namespace oracle

#endif  // DILUTE_TESTS_ORACLES_HPP
