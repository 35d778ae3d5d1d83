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


#include "dilute/app/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <thread>

#include "dilute/app/output.hpp"
#include "dilute/lie_closure.hpp"
#include "dilute/regime.hpp"
#include "dilute/rng.hpp"
#include "dilute/spectral.hpp"
#include "dilute/spin_algebra.hpp"
#include "dilute/statistics.hpp"
#include "dilute/trajectories.hpp"

namespace dilute::app {

namespace {

constexpr Index kLiouvillianMaxDim = 729;
constexpr Index kEffectiveMaxDim = 2187;

ChainSpec chain_for(const std::string& name, int n, const std::string& boundary) {
  if (name == "aklt") return aklt_chain(n);
  if (name == "mg") return mg_chain(n);
  return qubit_chain(n, boundary == "open" ? Boundary::open : Boundary::periodic);
}

TargetState target_for(const std::string& target, const ChainSpec& chain) {
  if (target == "aklt") return aklt_ground_state(chain);
  if (target == "mg_minus") return mg_ground_states(chain).first;
  if (target == "ghz") return ghz_state(chain.n_sites);
  if (target == "w") return w_state(chain.n_sites);
  if (target == "product") {
    StateVector v = StateVector::Zero(chain.dim());
    v(0) = 1.0;
    return TargetState{v, "product", 0.0};
  }
  fail(ErrorKind::invalid_argument, "unknown target '" + target + "'");
}

std::string model_for_target(const std::string& target) {
  if (target == "aklt") return "aklt";
  if (target == "mg_minus") return "mg";
  return "custom";
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

Json amplitudes(const StateVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(Json::array({v(i).real(), v(i).imag()}));
  return out;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string size_tag(int n) { return "N" + std::to_string(n); }

// Sum of L^dag L over all jumps, i.e. the hot operator of every cooled link together.
OperatorMatrix jump_weight(const LindbladModel& model) { return sum_jump_squares(model.jumps, model.dim()); }

}  // namespace

BuiltModel build_model(const ModelSpec& spec, int n_sites, std::uint64_t master_seed) {
  BuiltModel out;
  const ChainSpec chain = chain_for(spec.name, n_sites, spec.boundary);
  out.target = target_for(spec.target, chain);
  if (spec.name == "aklt") {
    out.model = build_aklt(chain);
  } else if (spec.name == "mg") {
    out.model = build_mg(chain);
  } else {
    out.model = LindbladModel{chain, OperatorMatrix::zero(chain.dim()), {}, 0.0};
  }
  out.model.gamma = spec.gamma;

  for (int link : spec.cooled_links) {
    std::vector<OperatorMatrix> jumps = spec.name == "aklt" ? aklt_jumps(link, chain)
                                        : spec.name == "mg" ? mg_jumps(link, chain)
                                                            : cooling_jumps(out.target, link, chain);
    out.validity.push_back(validate_jumps(jumps, out.target, link, chain));
    if (!out.validity.back().valid())
      out.warnings.push_back("N=" + std::to_string(n_sites) + ", link " + std::to_string(link) +
                             ": jump kernel dimension " + std::to_string(out.validity.back().kernel_dim) +
                             " differs from the cold dimension " + std::to_string(out.validity.back().cold_dim));
    out.model.jumps.insert(out.model.jumps.end(), jumps.begin(), jumps.end());
  }

  if (spec.delta_h) {
    const DeltaHSpec& d = *spec.delta_h;
    OperatorMatrix dh;
    if (d.random) {
      KernelizerBasis k = build_kernelizer(out.target, chain);
      dh = sample_delta_h(k, derive_seed(master_seed, {kTagModelDeltaH, d.random_seed,
                                                       static_cast<std::uint64_t>(n_sites)}), d.norm);
    } else {
      dh = aklt_delta_h(d.links.empty() ? default_delta_h_links(chain) : d.links, d.alpha, chain);
    }
    out.model.hamiltonian = OperatorMatrix((out.model.hamiltonian + dh).sparse(), true);
  }
  out.model.validate();
  out.target.check_eigenvector(out.model.hamiltonian);
  return out;
}

GapRow gap_row(const ExperimentConfig& config, int n_sites, std::vector<std::string>& warnings) {
  BuiltModel built = build_model(config.model, n_sites, config.seed);
  warnings.insert(warnings.end(), built.warnings.begin(), built.warnings.end());
  const LindbladModel& model = built.model;
  GapRow row;
  row.n_sites = n_sites;
  row.jumps_valid = std::all_of(built.validity.begin(), built.validity.end(),
                                [](const JumpValidity& v) { return v.valid(); });

  GapReport est = config.model.cooled_links.size() == 1
                      ? gap_estimate(model, built.target, config.model.cooled_links.front())
                      : gap_estimate(model, built.target, jump_weight(model));
  row.gap_estimate = est.gap_estimate.value_or(0.0);
  row.Q = est.Q.value_or(0.0);
  row.weak_coupling_valid = est.weak_coupling_valid;
  row.method = to_string(est.method);
  for (const auto& w : est.warnings) warnings.push_back(size_tag(n_sites) + ": " + w);

  if (config.gap.liouvillian && model.gamma > 0.0) {
    GapReport full;
    if (model.dim() <= kLiouvillianMaxDim) {
      full = liouvillian_gap(model, {}, &built.target);
    } else if (model.dim() <= kEffectiveMaxDim && row.jumps_valid) {
      full = effective_hamiltonian_gap(model, built.target);
    } else {
      warnings.push_back(size_tag(n_sites) + ": dimension " + std::to_string(model.dim()) +
                         " too large for an exact gap, estimate only");
      return row;
    }
    row.gap = full.gap;
    row.steady_state_count = full.steady_state_count;
    row.method = to_string(full.method);
    for (const auto& w : full.warnings) warnings.push_back(size_tag(n_sites) + ": " + w);
    if (row.gap && *row.gap > row.gap_estimate + 1e-9)
      warnings.push_back(size_tag(n_sites) + ": gap exceeds the estimate");
  }
  return row;
}

std::vector<ScanCell> scan_gap_vs_alpha_gamma(const ModelSpec& base, int n_sites, const std::vector<double>& alphas,
                                              const std::vector<double>& gammas, int threads) {
  require(!alphas.empty() && !gammas.empty(), ErrorKind::invalid_argument, "scan grids must not be empty");
  require(base.name == "aklt", ErrorKind::unsupported_model, "the alpha-gamma scan uses the AKLT link term");
  const std::size_t n_cells = alphas.size() * gammas.size();
  std::vector<ScanCell> cells(n_cells);
  std::vector<std::exception_ptr> errors(n_cells);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t i = next++; i < n_cells; i = next++) {
      try {
        ScanCell& c = cells[i];
        c.alpha = alphas[i / gammas.size()];
        c.gamma = gammas[i % gammas.size()];
        ModelSpec spec = base;
        spec.gamma = c.gamma;
        spec.delta_h.reset();
        if (c.alpha != 0.0) {
          DeltaHSpec d;
          if (base.delta_h && !base.delta_h->random) d.links = base.delta_h->links;
          d.alpha = c.alpha;
          spec.delta_h = d;
        }
        BuiltModel built = build_model(spec, n_sites, 0);
        GapReport full = liouvillian_gap(built.model, {}, &built.target);
        GapReport est = spec.cooled_links.size() == 1
                            ? gap_estimate(built.model, built.target, spec.cooled_links.front())
                            : gap_estimate(built.model, built.target, jump_weight(built.model));
        c.gap = full.gap.value_or(0.0);
        c.gap_estimate = est.gap_estimate.value_or(0.0);
        c.steady_state_count = full.steady_state_count;
        if (c.gap_estimate > 0.0) {
          c.relative_deviation = std::abs(c.gap - c.gap_estimate) / c.gap_estimate;
          c.agreement = *c.relative_deviation <= kScanAgreement;
        }
        c.bound_holds = c.gap <= c.gap_estimate + 1e-9;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_workers = std::min<int>(resolve_threads(threads), static_cast<int>(n_cells));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return cells;
}

SteerRow steer_row(const ExperimentConfig& config, const std::string& target_name, std::size_t target_index,
                   int n_sites) {
  SteerRow row;
  row.target = target_name;
  row.n_sites = n_sites;
  row.link = config.steer.link;
  const std::string model_name = model_for_target(target_name);
  const ChainSpec chain = chain_for(model_name, n_sites, config.model.boundary);
  const auto links = chain_links(chain);
  require(std::find(links.begin(), links.end(), row.link) != links.end(), ErrorKind::invalid_argument,
          "steer.link " + std::to_string(row.link) + " is not a link of the N=" + std::to_string(n_sites) + " chain");
  const TargetState target = target_for(target_name, chain);

  HotColdSplit split = hot_cold_split(target, row.link, chain);
  row.hot_dim = split.hot.size();
  row.cold_dim = split.cold.size();
  row.necessary_hot = necessary_condition_hot(target, row.link, chain);

  KernelizerBasis k = build_kernelizer(target, chain);
  row.kernelizer_dim_per_link = k.local_dims;
  row.kernelizer_dim = k.dimension;
  const std::uint64_t n_tag = static_cast<std::uint64_t>(n_sites);
  FlowCheck flow = necessary_condition_flow(k, target, row.link, derive_seed(config.seed, {kTagFlow, target_index, n_tag}));
  row.necessary_flow = flow.passes;
  row.witnesses = flow.witnesses;
  row.notes = flow.warnings;

  const Index block = chain.dim() - 1;
  row.lie_target = block * block - 1;
  if (config.steer.lie_closure) {
    if (block <= kMaxClosureBlock) {
      LieClosureOptions opts;
      opts.max_generations = config.steer.max_generations;
      opts.n_threads = resolve_threads(config.threads);
      LieClosureReport lie = lie_closure_dimension(k, opts);
      row.lie_dim = lie.dimension;
      row.lie_converged = lie.converged;
    } else {
      row.notes.push_back("Lie closure skipped: complement dimension " + std::to_string(block) + " exceeds " +
                          std::to_string(kMaxClosureBlock));
    }
  }

  if (config.steer.delta_h_samples > 0) {
    ModelSpec spec;
    spec.name = model_name;
    spec.target = target_name;
    spec.gamma = config.model.gamma > 0.0 ? config.model.gamma : 0.1;
    spec.cooled_links = {row.link};
    spec.boundary = config.model.boundary;
    BuiltModel built = build_model(spec, n_sites, config.seed);
    for (int i = 0; i < config.steer.delta_h_samples; ++i) {
      LindbladModel m = built.model;
      OperatorMatrix dh = sample_delta_h(
          k, derive_seed(config.seed, {kTagSteerDeltaH, target_index, n_tag, static_cast<std::uint64_t>(i)}),
          config.steer.delta_h_norm);
      m.hamiltonian = OperatorMatrix((m.hamiltonian + dh).sparse(), true);
      GapReport r = liouvillian_gap(m);
      ++row.delta_h_samples;
      if (r.steady_state_count == 1) ++row.delta_h_unique;
    }
  }
  return row;
}

namespace {

void run_gap(const ExperimentConfig& config, const Stamp& stamp, RunResult& result) {
  const std::string dir = config.output_dir;
  CsvTable table({"N", "gap", "gap_estimate", "Q", "steady_state_count", "method", "weak_coupling_valid",
                  "jumps_valid"});
  Json rows = Json::array();
  std::vector<std::pair<double, double>> est_points, gap_points;
  for (int n : config.model.n_sites) {
    GapRow r = gap_row(config, n, result.warnings);
    table.add_row({std::to_string(n), format_optional(r.gap), format_double(r.gap_estimate), format_double(r.Q),
                   std::to_string(r.steady_state_count), r.method, r.weak_coupling_valid ? "1" : "0",
                   r.jumps_valid ? "1" : "0"});
    rows.push_back(Json{{"N", n},
                        {"gap", optional_json(r.gap)},
                        {"gap_estimate", r.gap_estimate},
                        {"Q", r.Q},
                        {"method", r.method},
                        {"steady_state_count", r.steady_state_count},
                        {"weak_coupling_valid", r.weak_coupling_valid},
                        {"jumps_valid", r.jumps_valid}});
    if (r.gap_estimate > 0.0) est_points.emplace_back(n, r.gap_estimate);
    if (r.gap && *r.gap > 0.0) gap_points.emplace_back(n, *r.gap);

    if (config.gap.profile) {
      BuiltModel built = build_model(config.model, n, config.seed);
      QProfile p = q_energy_profile(built.model, built.target, config.model.cooled_links.front(), config.gap.bin_width);
      CsvTable prof({"epsilon", "q_epsilon", "bin_mean", "bin_std"});
      for (const auto& row : p.rows) {
        const QBin* bin = nullptr;
        for (const auto& b : p.bins)
          if (row.epsilon >= b.lo && row.epsilon < b.hi) bin = &b;
        if (!bin && !p.bins.empty() && row.epsilon >= p.bins.back().lo) bin = &p.bins.back();
        prof.add_row({format_double(row.epsilon), format_double(row.q), bin ? format_double(bin->mean) : "",
                      bin ? format_double(bin->std) : ""});
      }
      const std::string name = "q_profile_" + size_tag(n) + ".csv";
      write_csv(dir + "/" + name, prof, stamp);
      result.artifacts.push_back(name);
    }
  }
  write_csv(dir + "/gaps.csv", table, stamp);
  result.artifacts.push_back("gaps.csv");

  auto fits_json = [](const std::vector<std::pair<double, double>>& pts) {
    ParityFits f = power_law_fit_by_parity(pts);
    auto one = [](const std::optional<PowerLawFit>& p) {
      return p ? Json{{"m", p->m}, {"alpha", p->alpha}, {"n_points", p->n_points}} : Json(nullptr);
    };
    return Json{{"even", one(f.even)}, {"odd", one(f.odd)}};
  };
  Json body{{"task", "gap"}, {"model", config.model.name}, {"gamma", config.model.gamma}, {"rows", rows},
            {"power_law_gap_estimate", fits_json(est_points)}, {"power_law_gap", fits_json(gap_points)}};
  write_json(dir + "/gaps.json", stamped(stamp, body));
  result.artifacts.push_back("gaps.json");
}

void run_traject(const ExperimentConfig& config, const Stamp& stamp, RunResult& result) {
  const std::string dir = config.output_dir;
  for (int n : config.model.n_sites) {
    BuiltModel built = build_model(config.model, n, config.seed);
    result.warnings.insert(result.warnings.end(), built.warnings.begin(), built.warnings.end());
    TrajectoryConfig tc = config.trajectory.config;
    const std::uint64_t n_tag = static_cast<std::uint64_t>(n);
    tc.seed = derive_seed(config.seed, {kTagTrajectory, n_tag});
    tc.n_threads = config.threads;
    std::optional<StateVector> initial;
    if (config.trajectory.initial == "product") {
      initial = StateVector::Zero(built.model.dim());
      (*initial)(0) = 1.0;
    }
    TrajectoryEnsemble ens = run_ensemble(built.model, built.target, initial, tc);

    std::vector<double> mean(ens.time_grid.size()), std_dev(ens.time_grid.size(), 0.0);
    FitResult fit;
    const std::uint64_t boot_seed = derive_seed(config.seed, {kTagBootstrap, n_tag});
    const auto window = config.trajectory.fit_window.value_or(default_fit_window(ens.time_grid));
    if (config.trajectory.n_resamples >= 2) {
      BootstrapResult boot = bootstrap_mean(ens, config.trajectory.n_resamples, boot_seed);
      mean = boot.sample_mean;
      std_dev = boot.std;
      fit = fit_gap(boot, ens.time_grid, window);
    } else {
      for (Index j = 0; j < ens.n_times(); ++j) mean[j] = ens.overlaps.col(j).mean();
      fit = fit_gap(mean, ens.time_grid, window);
    }

    CsvTable table({"t", "mean_overlap", "bootstrap_std", "ln_one_minus_overlap"});
    for (std::size_t j = 0; j < mean.size(); ++j)
      table.add_row({format_double(ens.time_grid[j]), format_double(mean[j]), format_double(std_dev[j]),
                     format_double(std::log(std::max(1.0 - mean[j], kOverlapFloor)))});
    const std::string csv = "trajectory_" + size_tag(n) + ".csv";
    write_csv(dir + "/" + csv, table, stamp);
    result.artifacts.push_back(csv);

    if (!fit.curvature_ok)
      result.warnings.push_back(size_tag(n) + ": ln(1 - overlap) is curved over the fit window (" +
                                format_double(fit.curvature) + ")");
    Json body{{"task", "traject"},
              {"N", n},
              {"slope", fit.slope},
              {"intercept", fit.intercept},
              {"std", fit.slope_std},
              {"gap", fit.gap()},
              {"window", Json::array({fit.fit_window.first, fit.fit_window.second})},
              {"n_points", fit.n_points},
              {"curvature", fit.curvature},
              {"curvature_ok", fit.curvature_ok},
              {"n_traj", tc.n_trajectories},
              {"n_resamples", config.trajectory.n_resamples},
              {"trajectory_seed", tc.seed},
              {"bootstrap_seed", boot_seed},
              {"integrator", to_string(ens.integrator_used)},
              {"gamma", built.model.gamma}};
    const std::string js = "fit_" + size_tag(n) + ".json";
    write_json(dir + "/" + js, stamped(stamp, body));
    result.artifacts.push_back(js);

    if (config.trajectory.dump_raw) {
      std::vector<double> flat(static_cast<std::size_t>(ens.overlaps.size()));
      for (Index i = 0; i < ens.n_trajectories(); ++i)
        for (Index j = 0; j < ens.n_times(); ++j) flat[i * ens.n_times() + j] = ens.overlaps(i, j);
      const std::string bin = "trajectory_" + size_tag(n) + ".bin";
      write_matrix_binary(dir + "/" + bin, ens.n_trajectories(), ens.n_times(), flat);
      result.artifacts.push_back(bin);
    }
  }
}

void run_steer(const ExperimentConfig& config, const Stamp& stamp, RunResult& result) {
  Json rows = Json::array();
  for (std::size_t ti = 0; ti < config.steer.targets.size(); ++ti) {
    const std::string& target = config.steer.targets[ti];
    for (int n : config.model.n_sites) {
      if (target == "mg_minus" && n % 2 != 0) {
        result.warnings.push_back("mg_minus skipped for odd N=" + std::to_string(n));
        continue;
      }
      SteerRow r = steer_row(config, target, ti, n);
      Json witnesses = Json::array();
      for (const auto& w : r.witnesses) witnesses.push_back(amplitudes(w));
      Json row{{"target", r.target},
               {"N", r.n_sites},
               {"link", r.link},
               {"hot_dim", r.hot_dim},
               {"cold_dim", r.cold_dim},
               {"kernelizer_dim_per_link", r.kernelizer_dim_per_link},
               {"kernelizer_dim", r.kernelizer_dim},
               {"lie_dim", r.lie_dim ? Json(*r.lie_dim) : Json(nullptr)},
               {"lie_target", r.lie_target},
               {"lie_converged", r.lie_converged},
               {"necessary_hot", r.necessary_hot},
               {"necessary_flow", r.necessary_flow},
               {"pass", r.necessary_hot && r.necessary_flow && (!r.lie_dim || *r.lie_dim == r.lie_target)},
               {"witnesses", witnesses}};
      if (r.delta_h_samples > 0) {
        row["delta_h_samples"] = r.delta_h_samples;
        row["delta_h_unique_steady_state"] = r.delta_h_unique;
      }
      row["notes"] = r.notes;
      rows.push_back(row);
    }
  }
  write_json(config.output_dir + "/steer.json", stamped(stamp, Json{{"task", "steer"}, {"rows", rows}}));
  result.artifacts.push_back("steer.json");
}

void run_scan(const ExperimentConfig& config, const Stamp& stamp, RunResult& result) {
  const int n = config.model.n_sites.front();
  if (config.model.n_sites.size() > 1)
    result.warnings.push_back("scan uses the first chain size only, N=" + std::to_string(n));
  auto cells = scan_gap_vs_alpha_gamma(config.model, n, config.scan.alpha, config.scan.gamma, config.threads);
  CsvTable table({"alpha", "gamma", "gap", "gap_estimate", "gap_over_gamma", "steady_state_count",
                  "relative_deviation", "agreement", "bound_holds"});
  for (const auto& c : cells) {
    table.add_row({format_double(c.alpha), format_double(c.gamma), format_double(c.gap), format_double(c.gap_estimate),
                   format_double(c.gap / c.gamma), std::to_string(c.steady_state_count),
                   format_optional(c.relative_deviation), c.agreement ? "1" : "0", c.bound_holds ? "1" : "0"});
    if (!c.bound_holds)
      result.warnings.push_back("alpha=" + format_double(c.alpha) + ", gamma=" + format_double(c.gamma) +
                                ": gap exceeds the estimate");
  }
  write_csv(config.output_dir + "/scan.csv", table, stamp);
  result.artifacts.push_back("scan.csv");
}

void run_regime(const ExperimentConfig& config, const Stamp& stamp, RunResult& result) {
  const RegimeSpec& s = config.regime;
  RegimeEstimate r = regime_classify(s.L, s.ell, s.gamma, s.D);
  Json body{{"task", "regime"}, {"L", r.L},          {"ell", r.ell},
            {"gamma", r.gamma}, {"A", r.A},          {"D", r.D},
            {"regime", to_string(r.regime)},         {"t_A", optional_json(r.t_A)},
            {"t_D", optional_json(r.t_D)},           {"crossover", r.crossover}};
  write_json(config.output_dir + "/regime.json", stamped(stamp, body));
  result.artifacts.push_back("regime.json");
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config) {
  RunResult result;
  const Stamp stamp{config.hash, config.seed};
  std::filesystem::create_directories(config.output_dir);
  write_text(config.output_dir + "/config.yaml", config.canonical);
  result.artifacts.push_back("config.yaml");
  switch (config.task) {
    case Task::gap: run_gap(config, stamp, result); break;
    case Task::traject: run_traject(config, stamp, result); break;
    case Task::steer: run_steer(config, stamp, result); break;
    case Task::scan: run_scan(config, stamp, result); break;
    case Task::regime: run_regime(config, stamp, result); break;
  }
  return result;
}

}  // namespace dilute::app
