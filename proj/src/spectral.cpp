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

#include "dilute/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "dilute/linalg.hpp"
#include "dilute/spin_algebra.hpp"

namespace dilute {

const char* to_string(GapMethod method) {
  switch (method) {
    case GapMethod::full_liouvillian: return "full_liouvillian";
    case GapMethod::effective_hamiltonian: return "effective_hamiltonian";
    case GapMethod::trajectory_fit: return "trajectory_fit";
    case GapMethod::perturbative_estimate: return "perturbative_estimate";
  }
  return "unknown";
}

namespace {

double spectral_radius_bound(const OperatorMatrix& h) {
  RealVector row_sums = RealVector::Zero(h.dim());
  const SparseMatrix& m = h.sparse();
  for (Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) row_sums(it.row()) += std::abs(it.value());
  return h.dim() > 0 ? row_sums.maxCoeff() : 0.0;
}

std::vector<Index> support_of(const StateVector& v) {
  std::vector<Index> s;
  for (Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > kDropTolerance) s.push_back(i);
  return s;
}

StateVector restrict(const StateVector& v, const std::vector<Index>& idx) {
  StateVector out(static_cast<Index>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) out(static_cast<Index>(i)) = v(idx[i]);
  return out;
}

// Columns of v with the direction psi removed, re-orthonormalized.
DenseMatrix remove_direction(const DenseMatrix& v, const StateVector& psi) {
  if (psi.norm() == 0.0 || v.cols() == 0) return v;
  StateVector u = psi.normalized();
  DenseMatrix w = v - u * (u.adjoint() * v);
  Eigen::JacobiSVD<DenseMatrix> svd(w, Eigen::ComputeThinU);
  Index keep = 0;
  while (keep < svd.singularValues().size() && svd.singularValues()(keep) > 0.5) ++keep;
  return svd.matrixU().leftCols(keep);
}

struct Level {
  const std::vector<Index>* block;
  double energy;
  DenseMatrix space;     // block coordinates, orthonormal columns
  bool target_level;     // the target direction has been removed from `space`
};

// Streams the eigenspaces of H block by block. Blocks are the connected components of
// H together with `extras`, with every block touched by the target merged.
void for_each_level(const OperatorMatrix& h, const std::vector<const SparseMatrix*>& extras,
                    const TargetState* target, double rel_tol,
                    const std::function<void(const Level&)>& visit) {
  std::vector<const SparseMatrix*> ops{&h.sparse()};
  ops.insert(ops.end(), extras.begin(), extras.end());
  auto blocks = linalg::connected_blocks(h.dim(), ops);
  if (target) blocks = linalg::merge_blocks(std::move(blocks), support_of(target->vector));
  const double tol = rel_tol * std::max(1.0, spectral_radius_bound(h));
  for (const auto& idx : blocks) {
    DenseMatrix hb = linalg::dense_block(h.sparse(), idx);
    hb = 0.5 * (hb + hb.adjoint()).eval();
    linalg::HermitianEigen es = linalg::hermitian_eigen(hb);
    StateVector psi_b;
    if (target) psi_b = restrict(target->vector, idx);
    for (auto [lo, hi] : linalg::degenerate_groups(es.values, tol)) {
      Level level{&idx, es.values.segment(lo, hi - lo).mean(), es.vectors.middleCols(lo, hi - lo), false};
      if (target && psi_b.norm() > 1e-12 && std::abs(level.energy - target->energy) <= tol) {
        level.space = remove_direction(level.space, psi_b);
        level.target_level = true;
      }
      visit(level);
    }
  }
}

struct LevelRow {
  double energy;
  double q;
  bool target_level;
  bool empty;  // only the target itself lives at this energy
};

// Merge rows with equal energy across blocks, keeping the minimal q.
std::vector<LevelRow> merge_rows(std::vector<LevelRow> rows, double tol) {
  std::sort(rows.begin(), rows.end(), [](const LevelRow& a, const LevelRow& b) { return a.energy < b.energy; });
  std::vector<LevelRow> out;
  for (const LevelRow& r : rows) {
    if (!out.empty() && r.energy - out.back().energy <= tol) {
      LevelRow& o = out.back();
      if (o.empty) {
        o.q = r.q;
        o.empty = r.empty;
      } else if (!r.empty) {
        o.q = std::min(o.q, r.q);
      }
      o.target_level = o.target_level || r.target_level;
      continue;
    }
    out.push_back(r);
  }
  return out;
}

struct EstimateData {
  std::vector<LevelRow> rows;
  std::vector<double> hot_weights;
};

EstimateData estimate_levels(const LindbladModel& model, const TargetState& target, const OperatorMatrix& p_hot) {
  model.validate();
  target.check_eigenvector(model.hamiltonian);
  require(p_hot.dim() == model.dim(), ErrorKind::invalid_argument, "hot operator dimension mismatch");
  EstimateData data;
  const std::vector<Index>* cached = nullptr;
  SparseMatrix pb;
  for_each_level(model.hamiltonian, {&p_hot.sparse()}, &target, kDegeneracyTolerance, [&](const Level& level) {
    if (level.space.cols() == 0) {
      data.rows.push_back({level.energy, 0.0, true, true});
      return;
    }
    if (cached != level.block) {
      pb = linalg::sparse_block(p_hot.sparse(), *level.block);
      cached = level.block;
    }
    DenseMatrix m = level.space.adjoint() * (pb * level.space);
    m = 0.5 * (m + m.adjoint()).eval();
    RealVector w = linalg::hermitian_eigen(m, false).values;
    for (Index i = 0; i < w.size(); ++i) data.hot_weights.push_back(w(i));
    data.rows.push_back({level.energy, w.minCoeff(), level.target_level, false});
  });
  const double tol = kDegeneracyTolerance * std::max(1.0, spectral_radius_bound(model.hamiltonian));
  data.rows = merge_rows(std::move(data.rows), tol);
  return data;
}

bool weak_coupling(const LindbladModel& model) {
  const double n = model.chain.n_sites;
  const double dim = static_cast<double>(model.chain.dim());
  return model.gamma <= 0.1 * n / dim;
}

OperatorMatrix checked_jump_projector(const LindbladModel& model, const TargetState& target) {
  OperatorMatrix s = sum_jump_squares(model.jumps, model.dim());
  double idempotency = (s * s - s).max_abs();
  require(idempotency <= 1e-9, ErrorKind::incompatible_jumps,
          "sum of L^dag L is not a projector (residual " + std::to_string(idempotency) + ")");
  double leak = s.apply(target.vector).norm();
  require(leak <= 1e-9, ErrorKind::incompatible_jumps, "jumps do not annihilate the target");
  return s;
}

}  // namespace

EigenDecomposition eigendecompose(const OperatorMatrix& h, double rel_tol) {
  require(h.hermiticity_error() <= kHermitianTolerance, ErrorKind::invalid_argument,
          "eigendecompose needs a Hermitian operator");
  struct Piece {
    double energy;
    DenseMatrix full;
  };
  std::vector<Piece> pieces;
  const Index dim = h.dim();
  for_each_level(h, {}, nullptr, rel_tol, [&](const Level& level) {
    DenseMatrix full = DenseMatrix::Zero(dim, level.space.cols());
    for (size_t i = 0; i < level.block->size(); ++i) full.row((*level.block)[i]) = level.space.row(static_cast<Index>(i));
    pieces.push_back({level.energy, std::move(full)});
  });
  std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.energy < b.energy; });
  const double tol = rel_tol * std::max(1.0, spectral_radius_bound(h));
  EigenDecomposition out;
  for (auto& p : pieces) {
    if (!out.eigenvalues.empty() && p.energy - out.eigenvalues.back() <= tol) {
      SubspaceBasis& s = out.eigenspaces.back();
      DenseMatrix merged(dim, s.size() + p.full.cols());
      merged << s.vectors, p.full;
      s.vectors = std::move(merged);
      continue;
    }
    out.eigenvalues.push_back(p.energy);
    out.eigenspaces.push_back(SubspaceBasis{dim, std::move(p.full)});
  }
  return out;
}

DenseMatrix reduced_density_matrix(const StateVector& psi, const std::vector<int>& sites, const ChainSpec& chain) {
  chain.validate();
  require(psi.size() == chain.dim(), ErrorKind::invalid_argument, "state dimension mismatch");
  const int n = chain.n_sites;
  const Index d = chain.local_dim();
  std::vector<int> wrapped;
  for (int s : sites) wrapped.push_back(wrap_site(s, chain));
  std::vector<char> listed(n + 1, 0);
  for (int s : wrapped) {
    require(!listed[s], ErrorKind::invalid_argument, "sites must be distinct");
    listed[s] = 1;
  }
  Index local_dim = 1;
  for (size_t i = 0; i < wrapped.size(); ++i) local_dim *= d;
  const Index rest_dim = psi.size() / local_dim;
  DenseMatrix amp = DenseMatrix::Zero(local_dim, rest_dim);
  std::vector<int> digits(n + 1);
  for (Index idx = 0; idx < psi.size(); ++idx) {
    Index rem = idx;
    for (int site = n; site >= 1; --site) {
      digits[site] = static_cast<int>(rem % d);
      rem /= d;
    }
    Index a = 0, r = 0;
    for (int s : wrapped) a = a * d + digits[s];
    for (int site = 1; site <= n; ++site)
      if (!listed[site]) r = r * d + digits[site];
    amp(a, r) = psi(idx);
  }
  return amp * amp.adjoint();
}

HotColdSplit hot_cold_split(const TargetState& target, int link, const ChainSpec& chain, double rank_tol) {
  HotColdSplit out;
  out.reduced_density = reduced_density_matrix(target.vector, link_sites(link, chain), chain);
  DenseMatrix rho = 0.5 * (out.reduced_density + out.reduced_density.adjoint());
  linalg::HermitianEigen es = linalg::hermitian_eigen(rho);
  const Index n = rho.rows();
  Index n_hot = 0;
  while (n_hot < n && es.values(n_hot) <= rank_tol) ++n_hot;
  out.hot = SubspaceBasis{n, es.vectors.leftCols(n_hot)};
  out.cold = SubspaceBasis{n, es.vectors.rightCols(n - n_hot)};
  return out;
}

OperatorMatrix hot_projector(const TargetState& target, int link, const ChainSpec& chain) {
  HotColdSplit split = hot_cold_split(target, link, chain);
  return embed(OperatorMatrix::from_dense(split.hot.projector(), true), link_sites(link, chain), chain);
}

OperatorMatrix cooling_projector(const LindbladModel& model, const TargetState& target, int link) {
  if (model.jumps.empty()) return hot_projector(target, link, model.chain);
  return checked_jump_projector(model, target);
}

GapReport gap_estimate(const LindbladModel& model, const TargetState& target, int link) {
  return gap_estimate(model, target, cooling_projector(model, target, link));
}

GapReport gap_estimate(const LindbladModel& model, const TargetState& target, const OperatorMatrix& p_hot) {
  EstimateData data = estimate_levels(model, target, p_hot);
  GapReport report;
  report.method = GapMethod::perturbative_estimate;
  double q = std::numeric_limits<double>::infinity();
  for (const LevelRow& r : data.rows)
    if (!r.empty) q = std::min(q, r.q);
  if (!std::isfinite(q)) {
    q = 0.0;
    report.warnings.push_back("no excited levels; Q set to 0");
  }
  q = std::clamp(q, 0.0, 1.0);
  report.Q = q;
  report.gap_estimate = 0.5 * q * model.gamma;
  report.weak_coupling_valid = weak_coupling(model);
  if (!report.weak_coupling_valid) report.warnings.push_back("gamma is not small against N/d^N");
  int dark = 0;
  for (double w : data.hot_weights) {
    report.perturbative_rates.push_back(0.5 * model.gamma * w);
    if (w <= 1e-8) ++dark;
  }
  std::sort(report.perturbative_rates.begin(), report.perturbative_rates.end());
  report.steady_state_count = 1 + dark;
  return report;
}

QProfile q_energy_profile(const LindbladModel& model, const TargetState& target, int link, double bin_width) {
  require(bin_width > 0.0, ErrorKind::invalid_argument, "bin width must be positive");
  EstimateData data = estimate_levels(model, target, cooling_projector(model, target, link));
  QProfile profile;
  profile.bin_width = bin_width;
  for (const LevelRow& r : data.rows) profile.rows.push_back({r.energy, r.target_level ? 0.0 : r.q});
  std::vector<QProfileRow> excited;
  for (const LevelRow& r : data.rows)
    if (!r.target_level) excited.push_back({r.energy, r.q});
  if (excited.empty()) return profile;
  const double start = std::floor(excited.front().epsilon / bin_width) * bin_width;
  size_t i = 0;
  for (int b = 0; i < excited.size(); ++b) {
    const double lo = start + b * bin_width, hi = lo + bin_width;
    double sum = 0.0, sum2 = 0.0;
    int count = 0;
    while (i < excited.size() && excited[i].epsilon < hi) {
      sum += excited[i].q;
      sum2 += excited[i].q * excited[i].q;
      ++count;
      ++i;
    }
    if (count == 0) continue;
    const double mean = sum / count;
    profile.bins.push_back({lo, hi, mean, std::sqrt(std::max(0.0, sum2 / count - mean * mean)), count});
  }
  return profile;
}

Eigen::VectorXcd effective_hamiltonian_spectrum(const LindbladModel& model, const TargetState& target) {
  model.validate();
  target.check_eigenvector(model.hamiltonian);
  OperatorMatrix s = checked_jump_projector(model, target);
  auto blocks = linalg::connected_blocks(model.dim(), {&model.hamiltonian.sparse(), &s.sparse()});
  blocks = linalg::merge_blocks(std::move(blocks), support_of(target.vector));
  std::vector<cplx> values;
  values.reserve(static_cast<size_t>(model.dim()));
  for (const auto& idx : blocks) {
    const Index n = static_cast<Index>(idx.size());
    DenseMatrix ht = linalg::dense_block(model.hamiltonian.sparse(), idx) - target.energy * DenseMatrix::Identity(n, n) -
                     cplx(0.0, 0.5 * model.gamma) * linalg::dense_block(s.sparse(), idx);
    StateVector psi_b = restrict(target.vector, idx);
    if (psi_b.norm() > 1e-12) {
      DenseMatrix q = linalg::orthogonal_complement(psi_b.normalized());
      ht = q.adjoint() * ht * q;
    }
    Eigen::VectorXcd ev = linalg::general_eigen(ht).values;
    values.insert(values.end(), ev.data(), ev.data() + ev.size());
  }
  Eigen::VectorXcd out(static_cast<Index>(values.size()));
  for (size_t i = 0; i < values.size(); ++i) out(static_cast<Index>(i)) = values[i];
  return out;
}

GapReport effective_hamiltonian_gap(const LindbladModel& model, const TargetState& target) {
  Eigen::VectorXcd lambda = effective_hamiltonian_spectrum(model, target);
  OperatorMatrix s = sum_jump_squares(model.jumps, model.dim());
  GapReport report = gap_estimate(model, target, s);
  report.method = GapMethod::effective_hamiltonian;
  const double zero_tol = model.gamma > 0.0 ? kSteadyStateTolerance * model.gamma : 1e-12;
  double gap = std::numeric_limits<double>::infinity();
  int zero = 0;
  double most_negative = 0.0;
  for (Index i = 0; i < lambda.size(); ++i) {
    const double kappa = -lambda(i).imag();
    most_negative = std::min(most_negative, kappa);
    if (kappa <= zero_tol) ++zero;
    gap = std::min(gap, std::max(0.0, kappa));
  }
  if (most_negative < -1e-9)
    report.warnings.push_back("effective Hamiltonian has growing modes, min -Im(lambda) = " + std::to_string(most_negative));
  report.gap = std::isfinite(gap) ? gap : 0.0;
  report.steady_state_count = 1 + zero;
  return report;
}

std::vector<DarkState> find_dark_states(const LindbladModel& model, const TargetState& target, double tol) {
  model.validate();
  target.check_eigenvector(model.hamiltonian);
  OperatorMatrix s = sum_jump_squares(model.jumps, model.dim());
  const ChainSpec& chain = model.chain;
  const std::vector<int> links = chain_links(chain);
  OperatorMatrix pair_j2 = total_spin_operators(2, chain.local_spin).j2;
  OperatorMatrix pair_jz = total_spin_operators(2, chain.local_spin).jz;
  std::vector<OperatorMatrix> link_j2, link_jz;
  for (int link : links) {
    link_j2.push_back(embed(pair_j2, link_sites(link, chain), chain));
    link_jz.push_back(embed(pair_jz, link_sites(link, chain), chain));
  }

  std::vector<DarkState> out;
  const Index dim = model.dim();
  for_each_level(model.hamiltonian, {&s.sparse()}, &target, kDegeneracyTolerance, [&](const Level& level) {
    if (level.space.cols() == 0) return;
    const auto& idx = *level.block;
    DenseMatrix m = level.space.adjoint() * (linalg::sparse_block(s.sparse(), idx) * level.space);
    m = 0.5 * (m + m.adjoint()).eval();
    linalg::HermitianEigen es = linalg::hermitian_eigen(m);
    Index n_dark = 0;
    while (n_dark < es.values.size() && es.values(n_dark) <= tol) ++n_dark;
    if (n_dark == 0) return;
    std::vector<DenseMatrix> groups{level.space * es.vectors.leftCols(n_dark)};
    for (const auto& j2 : link_j2) {
      SparseMatrix jb = linalg::sparse_block(j2.sparse(), idx);
      std::vector<DenseMatrix> refined;
      for (const DenseMatrix& g : groups) {
        if (g.cols() == 1) {
          refined.push_back(g);
          continue;
        }
        DenseMatrix c = g.adjoint() * (jb * g);
        c = 0.5 * (c + c.adjoint()).eval();
        linalg::HermitianEigen ce = linalg::hermitian_eigen(c);
        for (auto [lo, hi] : linalg::degenerate_groups(ce.values, 1e-8))
          refined.push_back(g * ce.vectors.middleCols(lo, hi - lo));
      }
      groups = std::move(refined);
    }
    for (const DenseMatrix& g : groups) {
      for (Index c = 0; c < g.cols(); ++c) {
        DarkState ds;
        ds.energy = level.energy;
        ds.vector = StateVector::Zero(dim);
        for (size_t i = 0; i < idx.size(); ++i) ds.vector(idx[i]) = g(static_cast<Index>(i), c);
        for (size_t k = 0; k < links.size(); ++k) {
          ds.link_j2.push_back(ds.vector.dot(link_j2[k].apply(ds.vector)).real());
          ds.link_jz.push_back(ds.vector.dot(link_jz[k].apply(ds.vector)).real());
        }
        out.push_back(std::move(ds));
      }
    }
  });
  std::stable_sort(out.begin(), out.end(), [](const DarkState& a, const DarkState& b) { return a.energy < b.energy; });
  return out;
}

}  // namespace dilute
