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


#include "dilute/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include <boost/math/tools/roots.hpp>

#include "dilute/linalg.hpp"
#include "dilute/rng.hpp"

namespace dilute {

const char* to_string(Integrator integrator) {
  switch (integrator) {
    case Integrator::automatic: return "automatic";
    case Integrator::spectral: return "spectral";
    case Integrator::runge_kutta: return "runge_kutta";
  }
  return "unknown";
}

void TrajectoryConfig::validate() const {
  require(n_trajectories >= 1, ErrorKind::invalid_argument, "n_trajectories must be >= 1");
  require(dt_record > 0.0 && std::isfinite(dt_record), ErrorKind::invalid_argument, "dt_record must be positive");
  require(t_max >= 0.0 && std::isfinite(t_max), ErrorKind::invalid_argument, "t_max must be nonnegative");
  require(integrator_tolerance > 0.0, ErrorKind::invalid_argument, "integrator_tolerance must be positive");
  require(min_step > 0.0, ErrorKind::invalid_argument, "min_step must be positive");
  require(n_threads >= 0, ErrorKind::invalid_argument, "n_threads must be >= 0");
}

std::vector<double> record_grid(double t_max, double dt_record) {
  const long n = static_cast<long>(std::floor(t_max / dt_record + 1e-9));
  std::vector<double> t(static_cast<size_t>(n + 1));
  for (long k = 0; k <= n; ++k) t[static_cast<size_t>(k)] = static_cast<double>(k) * dt_record;
  return t;
}

namespace {

constexpr double kMaxCondition = 1e6;

struct JumpSet {
  const std::vector<OperatorMatrix>* jumps;
};

// Applies a jump drawn with weights ||L_j psi||^2. Returns false if no channel has weight.
bool apply_jump(StateVector& psi, const JumpSet& js, RandomStream& rng) {
  std::vector<StateVector> images;
  std::vector<double> weights;
  double total = 0.0;
  for (const auto& l : *js.jumps) {
    images.push_back(l.apply(psi));
    weights.push_back(images.back().squaredNorm());
    total += weights.back();
  }
  if (!(total > 0.0)) return false;
  double u = rng.uniform() * total;
  size_t pick = 0;
  while (pick + 1 < weights.size() && (u >= weights[pick] || weights[pick] == 0.0)) {
    u -= weights[pick];
    ++pick;
  }
  psi = images[pick] / std::sqrt(weights[pick]);
  return true;
}

double target_overlap(const StateVector& target, const StateVector& psi, double norm2) {
  return std::clamp(std::norm(target.dot(psi)) / norm2, 0.0, 1.0);
}

// H_eff blocks with precomputed eigenbases. psi(tau) = sum_b V_b diag(exp(-i lambda_b tau)) c_b.
class SpectralPropagator {
 public:
  SpectralPropagator(const SparseMatrix& heff, const SparseMatrix& pattern, const StateVector& target) {
    blocks_ = linalg::connected_blocks(heff.rows(), {&heff, &pattern});
    dim_ = heff.rows();
    for (const auto& idx : blocks_) {
      Block b;
      DenseMatrix hb = linalg::dense_block(heff, idx);
      linalg::GeneralEigen es = linalg::general_eigen(hb, true);
      b.lambda = es.values;
      b.v = es.vectors;
      Eigen::PartialPivLU<DenseMatrix> lu(b.v);
      b.vinv = lu.inverse();
      condition_ = std::max(condition_, b.v.cwiseAbs().colwise().sum().maxCoeff() *
                                            b.vinv.cwiseAbs().colwise().sum().maxCoeff());
      b.gram = b.v.adjoint() * b.v;
      StateVector tb(static_cast<Index>(idx.size()));
      for (size_t i = 0; i < idx.size(); ++i) tb(static_cast<Index>(i)) = target(idx[i]);
      b.target_row = tb.adjoint() * b.v;
      b.coeff = StateVector::Zero(b.v.cols());
      parts_.push_back(std::move(b));
    }
  }

  double condition() const { return condition_; }

  void reset(const StateVector& psi) {
    active_.clear();
    for (size_t k = 0; k < blocks_.size(); ++k) {
      const auto& idx = blocks_[k];
      StateVector pb(static_cast<Index>(idx.size()));
      for (size_t i = 0; i < idx.size(); ++i) pb(static_cast<Index>(i)) = psi(idx[i]);
      if (pb.squaredNorm() == 0.0) continue;
      parts_[k].coeff = parts_[k].vinv * pb;
      active_.push_back(k);
    }
  }

  double norm2(double tau) {
    double n2 = 0.0;
    for (size_t k : active_) {
      Block& b = parts_[k];
      b.work = evolve(b, tau);
      n2 += std::real(b.work.dot(b.gram * b.work));
    }
    return n2;
  }

  // Overlap numerator |<target|psi(tau)>|^2; call after norm2(tau).
  double target_amplitude2() const {
    cplx a = 0.0;
    for (size_t k : active_) a += (parts_[k].target_row * parts_[k].work)(0);
    return std::norm(a);
  }

  StateVector state(double tau) {
    StateVector psi = StateVector::Zero(dim_);
    for (size_t k : active_) {
      StateVector pb = parts_[k].v * evolve(parts_[k], tau);
      const auto& idx = blocks_[k];
      for (size_t i = 0; i < idx.size(); ++i) psi(idx[i]) = pb(static_cast<Index>(i));
    }
    return psi;
  }

 private:
  struct Block {
    Eigen::VectorXcd lambda;
    DenseMatrix v, vinv, gram;
    Eigen::RowVectorXcd target_row;
    StateVector coeff, work;
  };

  static StateVector evolve(const Block& b, double tau) {
    return (b.coeff.array() * (cplx(0.0, -tau) * b.lambda.array()).exp()).matrix();
  }

  std::vector<std::vector<Index>> blocks_;
  std::vector<Block> parts_;
  std::vector<size_t> active_;
  Index dim_ = 0;
  double condition_ = 0.0;
};

struct Context {
  const LindbladModel* model;
  const StateVector* target;
  const TrajectoryConfig* config;
  const std::vector<double>* grid;
  SparseMatrix heff;
  JumpSet jumps;
};

// Time tau in [lo, hi] where f crosses zero; f(lo) > 0 >= f(hi).
template <class F>
double find_crossing(F&& f, double lo, double hi, double flo, double fhi, double tol) {
  if (fhi == 0.0) return hi;
  std::uintmax_t iters = 200;
  auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol * std::max(1.0, std::abs(a)); };
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, stop, iters);
  return 0.5 * (r.first + r.second);
}

long run_spectral(const Context& ctx, SpectralPropagator& prop, StateVector psi, RandomStream& rng,
                  Eigen::Ref<RealVector> row) {
  const auto& grid = *ctx.grid;
  double t0 = 0.0;
  double r = rng.uniform();
  long jumps = 0;
  prop.reset(psi);
  double lo = 0.0;  // last local time known to be above threshold
  for (size_t k = 0; k < grid.size(); ++k) {
    for (;;) {
      const double tau = grid[k] - t0;
      const double n2 = prop.norm2(tau);
      if (n2 > r) {
        row(static_cast<Index>(k)) = std::clamp(prop.target_amplitude2() / n2, 0.0, 1.0);
        lo = tau;
        break;
      }
      auto f = [&](double x) { return prop.norm2(x) - r; };
      const double flo = f(lo);
      const double tj = find_crossing(f, lo, tau, flo, n2 - r, ctx.config->integrator_tolerance);
      psi = prop.state(tj);
      psi /= psi.norm();
      if (!apply_jump(psi, ctx.jumps, rng))
        fail(ErrorKind::integration_failure, "jump weight vanished at t = " + std::to_string(t0 + tj));
      if (++jumps > ctx.config->max_jumps)
        fail(ErrorKind::integration_failure, "jump limit exceeded at t = " + std::to_string(t0 + tj));
      t0 += tj;
      r = rng.uniform();
      prop.reset(psi);
      lo = 0.0;
    }
  }
  return jumps;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct RkStep {
  StateVector y;
  double error;
};

RkStep dopri_step(const SparseMatrix& heff, const StateVector& y, double h) {
  const cplx mi(0.0, -1.0);
  auto f = [&](const StateVector& v) -> StateVector { return mi * (heff * v); };
  StateVector k1 = f(y);
  StateVector k2 = f(y + h * a21 * k1);
  StateVector k3 = f(y + h * (a31 * k1 + a32 * k2));
  StateVector k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  StateVector k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  StateVector k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  StateVector y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  StateVector k7 = f(y5);
  StateVector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return {std::move(y5), err.cwiseAbs().maxCoeff()};
}

long run_runge_kutta(const Context& ctx, StateVector psi, RandomStream& rng, Eigen::Ref<RealVector> row) {
  const auto& grid = *ctx.grid;
  const TrajectoryConfig& cfg = *ctx.config;
  const double tol = cfg.integrator_tolerance;
  double t = 0.0;
  double h = std::min(0.1, ctx.config->dt_record);
  double r = rng.uniform();
  long jumps = 0;
  for (size_t k = 0; k < grid.size(); ++k) {
    while (t < grid[k]) {
      const double step = std::min(h, grid[k] - t);
      RkStep s = dopri_step(ctx.heff, psi, step);
      const double scale = tol * std::max(1.0, psi.cwiseAbs().maxCoeff());
      if (s.error > scale && step > cfg.min_step) {
        h = std::max(cfg.min_step, step * std::max(0.2, 0.9 * std::pow(scale / s.error, 0.2)));
        continue;
      }
      if (s.error > scale)
        fail(ErrorKind::integration_failure, "step size underflow at t = " + std::to_string(t));
      const double n2 = s.y.squaredNorm();
      if (n2 <= r) {
        auto f = [&](double x) { return dopri_step(ctx.heff, psi, x).y.squaredNorm() - r; };
        const double hj = find_crossing(f, 0.0, step, psi.squaredNorm() - r, n2 - r, tol);
        psi = dopri_step(ctx.heff, psi, hj).y;
        psi /= psi.norm();
        if (!apply_jump(psi, ctx.jumps, rng))
          fail(ErrorKind::integration_failure, "jump weight vanished at t = " + std::to_string(t + hj));
        if (++jumps > cfg.max_jumps)
          fail(ErrorKind::integration_failure, "jump limit exceeded at t = " + std::to_string(t + hj));
        t += hj;
        r = rng.uniform();
        continue;
      }
      psi = std::move(s.y);
      t += step;
      if (s.error > 0.0) h = step * std::min(5.0, 0.9 * std::pow(scale / s.error, 0.2));
      else h = step * 5.0;
    }
    t = grid[k];
    row(static_cast<Index>(k)) = target_overlap(*ctx.target, psi, psi.squaredNorm());
  }
  return jumps;
}

}  // namespace

TrajectoryEnsemble run_ensemble(const LindbladModel& model, const TargetState& target,
                                const std::optional<StateVector>& initial, const TrajectoryConfig& config) {
  config.validate();
  model.validate();
  require(target.vector.size() == model.dim() && is_normalized(target.vector), ErrorKind::invalid_target,
          "target must be a normalized state of the model dimension");
  if (initial)
    require(initial->size() == model.dim() && is_normalized(*initial), ErrorKind::invalid_argument,
            "initial state must be normalized with the model dimension");

  Context ctx{&model, &target.vector, &config, nullptr, {}, {&model.jumps}};
  const OperatorMatrix s = sum_jump_squares(model.jumps, model.dim());
  ctx.heff = model.hamiltonian.sparse() - cplx(0.0, 0.5 * model.gamma) * s.sparse();
  ctx.heff.prune(cplx(0.0), kDropTolerance);

  TrajectoryEnsemble ens;
  ens.time_grid = record_grid(config.t_max, config.dt_record);
  ctx.grid = &ens.time_grid;
  const Index n_traj = config.n_trajectories;
  ens.overlaps = RealMatrix::Zero(n_traj, static_cast<Index>(ens.time_grid.size()));
  ens.seeds_used.resize(static_cast<size_t>(n_traj));
  ens.jump_counts.assign(static_cast<size_t>(n_traj), 0);
  for (Index i = 0; i < n_traj; ++i) ens.seeds_used[static_cast<size_t>(i)] = derive_seed(config.seed, {static_cast<std::uint64_t>(i)});

  std::optional<SpectralPropagator> spectral;
  Integrator mode = config.integrator;
  if (mode != Integrator::runge_kutta) {
    spectral.emplace(ctx.heff, s.sparse(), target.vector);
    if (spectral->condition() > kMaxCondition) {
      require(mode == Integrator::automatic, ErrorKind::integration_failure,
              "H_eff eigenbasis is ill conditioned (" + std::to_string(spectral->condition()) + ")");
      spectral.reset();
      mode = Integrator::runge_kutta;
    } else {
      mode = Integrator::spectral;
    }
  }
  ens.integrator_used = mode;

  int n_threads = config.n_threads > 0 ? config.n_threads : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, static_cast<int>(std::max<Index>(1, n_traj)));
  std::atomic<Index> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    std::optional<SpectralPropagator> local = spectral;
    for (;;) {
      const Index i = next.fetch_add(1);
      if (i >= n_traj) return;
      try {
        RandomStream rng(ens.seeds_used[static_cast<size_t>(i)]);
        StateVector psi = initial ? *initial : haar_state(model.dim(), rng);
        RealVector row(ens.overlaps.cols());
        long nj = local ? run_spectral(ctx, *local, psi, rng, row) : run_runge_kutta(ctx, psi, rng, row);
        ens.overlaps.row(i) = row.transpose();
        ens.jump_counts[static_cast<size_t>(i)] = nj;
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        const std::string what = std::string(e.what()).substr(std::string(to_string(e.kind())).size() + 2);
        if (!error) error = std::make_exception_ptr(Error(e.kind(), "trajectory " + std::to_string(i) + ", " + what));
        next = n_traj;
        return;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n_traj;
        return;
      }
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return ens;
}

}  // namespace dilute
