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


// Command-line front end. Exit status: 0 success, 2 configuration error, 3 solver error.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dilute/app/config.hpp"
#include "dilute/app/experiment.hpp"
#include "dilute/app/output.hpp"
#include "dilute/app/plot.hpp"
#include "dilute/error.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

int run_task(const std::string& task, const Options& opts) {
  using namespace dilute::app;
  ExperimentConfig config;
  try {
    YAML::Node root = opts.config_path.empty() ? load_config_string("") : load_config_file(opts.config_path);
    apply_override(root, "task=" + task);
    for (const auto& o : opts.overrides) apply_override(root, o);
    if (opts.seed) apply_override(root, "seed=" + std::to_string(*opts.seed));
    if (opts.threads) apply_override(root, "threads=" + std::to_string(*opts.threads));
    if (!opts.out.empty()) root["output"] = opts.out;
    config = parse_config(root);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    RunResult r = run_experiment(config);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& a : r.artifacts) std::cout << config.output_dir << "/" << a << "\n";
  } catch (const dilute::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative preparation of many-body states: gaps, trajectories and steerability."};
  app.set_version_flag("--version", std::string(dilute::app::tool_version()));
  app.require_subcommand(1);

  Options opts;
  int status = kExitOk;
  for (const char* task : {"gap", "traject", "steer", "scan", "regime"}) {
    CLI::App* sub = app.add_subcommand(task, std::string("run the ") + task + " task");
    sub->add_option("--config", opts.config_path, "YAML configuration file");
    sub->add_option("--set", opts.overrides, "override, key.path=value (repeatable)");
    sub->add_option("--out", opts.out, "output directory");
    sub->add_option("--seed", opts.seed, "master seed");
    sub->add_option("--threads", opts.threads, "worker threads, 0 for all cores");
    sub->callback([task, &opts, &status] { status = run_task(task, opts); });
  }

  std::string plot_dir = "out";
  CLI::App* plot = app.add_subcommand("plot", "render SVG figures from a run directory");
  plot->add_option("--out", plot_dir, "run directory holding the CSV artifacts");
  plot->callback([&plot_dir] {
    dilute::app::PlotResult r = dilute::app::render_plots(plot_dir);
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& f : r.written) std::cout << plot_dir << "/" << f << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  return status;
}
