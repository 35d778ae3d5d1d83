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


#include "dilute/app/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace dilute::app {

namespace {

std::string where(const YAML::Node& node, const std::string& field) {
  const YAML::Mark mark = node.Mark();
  std::string out = "field '" + field + "'";
  if (mark.line >= 0) out += " (line " + std::to_string(mark.line + 1) + ")";
  return out;
}

[[noreturn]] void bad(const YAML::Node& node, const std::string& field, const std::string& what) {
  throw ConfigError(where(node, field) + ": " + what);
}

template <class T>
T scalar(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) bad(node, field, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    bad(node, field, "cannot convert '" + node.Scalar() + "'");
  }
}

template <class T>
std::vector<T> scalar_or_list(const YAML::Node& node, const std::string& field) {
  std::vector<T> out;
  if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i)
      out.push_back(scalar<T>(node[i], field + "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(scalar<T>(node, field));
  }
  if (out.empty()) bad(node, field, "must not be empty");
  return out;
}

// Walks a mapping, rejecting keys without a handler.
void for_keys(const YAML::Node& map, const std::string& prefix,
              const std::map<std::string, std::function<void(const YAML::Node&, const std::string&)>>& handlers) {
  if (!map.IsMap()) bad(map, prefix.empty() ? "<root>" : prefix, "expected a mapping");
  for (auto it = map.begin(); it != map.end(); ++it) {
    const std::string key = it->first.as<std::string>();
    const std::string field = prefix.empty() ? key : prefix + "." + key;
    auto h = handlers.find(key);
    if (h == handlers.end()) bad(it->first, field, "unknown key");
    h->second(it->second, field);
  }
}

void positive(double v, const YAML::Node& node, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) bad(node, field, "must be positive");
}

void nonnegative(double v, const YAML::Node& node, const std::string& field) {
  if (!(v >= 0.0) || !std::isfinite(v)) bad(node, field, "must be nonnegative");
}

Task parse_task(const YAML::Node& node, const std::string& field) {
  const std::string s = scalar<std::string>(node, field);
  if (s == "gap") return Task::gap;
  if (s == "traject") return Task::traject;
  if (s == "steer") return Task::steer;
  if (s == "scan") return Task::scan;
  if (s == "regime") return Task::regime;
  bad(node, field, "unknown task '" + s + "'");
}

Integrator parse_integrator(const YAML::Node& node, const std::string& field) {
  const std::string s = scalar<std::string>(node, field);
  if (s == "automatic") return Integrator::automatic;
  if (s == "spectral") return Integrator::spectral;
  if (s == "runge_kutta") return Integrator::runge_kutta;
  bad(node, field, "unknown integrator '" + s + "'");
}

void parse_delta_h(const YAML::Node& node, const std::string& prefix, DeltaHSpec& d) {
  if (node.IsNull()) return;
  bool fixed = false;
  for_keys(node, prefix,
           {{"links", [&](const YAML::Node& n, const std::string& f) {
               d.links = scalar_or_list<int>(n, f);
               fixed = true;
             }},
            {"alpha", [&](const YAML::Node& n, const std::string& f) {
               d.alpha = scalar<double>(n, f);
               fixed = true;
             }},
            {"random_seed", [&](const YAML::Node& n, const std::string& f) {
               d.random_seed = scalar<std::uint64_t>(n, f);
               d.random = true;
             }},
            {"norm", [&](const YAML::Node& n, const std::string& f) {
               d.norm = scalar<double>(n, f);
               positive(d.norm, n, f);
               d.random = true;
             }}});
  if (fixed && d.random) bad(node, prefix, "give either {links, alpha} or {random_seed, norm}");
}

void parse_model(const YAML::Node& node, ModelSpec& m) {
  for_keys(node, "model",
           {{"name", [&](const YAML::Node& n, const std::string& f) {
               m.name = scalar<std::string>(n, f);
               if (m.name != "aklt" && m.name != "mg" && m.name != "custom")
                 bad(n, f, "expected aklt, mg or custom");
             }},
            {"n_sites", [&](const YAML::Node& n, const std::string& f) {
               m.n_sites = scalar_or_list<int>(n, f);
               for (int v : m.n_sites)
                 if (v < 2) bad(n, f, "chains need at least 2 sites");
             }},
            {"gamma", [&](const YAML::Node& n, const std::string& f) {
               m.gamma = scalar<double>(n, f);
               nonnegative(m.gamma, n, f);
             }},
            {"cooled_links", [&](const YAML::Node& n, const std::string& f) {
               m.cooled_links = scalar_or_list<int>(n, f);
             }},
            {"delta_h", [&](const YAML::Node& n, const std::string& f) {
               if (n.IsNull()) return;
               DeltaHSpec d;
               parse_delta_h(n, f, d);
               m.delta_h = d;
             }},
            {"target", [&](const YAML::Node& n, const std::string& f) { m.target = scalar<std::string>(n, f); }},
            {"boundary", [&](const YAML::Node& n, const std::string& f) {
               m.boundary = scalar<std::string>(n, f);
               if (m.boundary != "periodic" && m.boundary != "open") bad(n, f, "expected periodic or open");
             }}});
  if (m.target.empty()) m.target = m.name == "aklt" ? "aklt" : m.name == "mg" ? "mg_minus" : "ghz";
  const std::set<std::string> allowed = m.name == "aklt"  ? std::set<std::string>{"aklt"}
                                        : m.name == "mg"  ? std::set<std::string>{"mg_minus"}
                                                          : std::set<std::string>{"ghz", "w", "product"};
  if (!allowed.count(m.target)) bad(node, "model.target", "target '" + m.target + "' does not fit model " + m.name);
  if (m.name != "custom" && m.boundary != "periodic") bad(node, "model.boundary", "aklt and mg chains are periodic");
  if (m.delta_h && !m.delta_h->random && m.name != "aklt")
    bad(node, "model.delta_h", "{links, alpha} is the AKLT link term; use {random_seed, norm} for other models");
  for (int n : m.n_sites) {
    const int max_link = (m.boundary == "periodic" && n >= 3) ? n : n - 1;
    for (int link : m.cooled_links)
      if (link < 1 || link > max_link)
        bad(node, "model.cooled_links", "link " + std::to_string(link) + " is not valid for N=" + std::to_string(n));
    if (m.delta_h && !m.delta_h->random)
      for (int link : m.delta_h->links)
        if (link < 1 || link > max_link)
          bad(node, "model.delta_h.links",
              "link " + std::to_string(link) + " is not valid for N=" + std::to_string(n));
    if (m.name == "mg" && n % 2 != 0) bad(node, "model.n_sites", "mg chains need an even number of sites");
  }
  if (m.cooled_links.empty()) bad(node, "model.cooled_links", "must not be empty");
}

void parse_gap(const YAML::Node& node, GapSpec& g) {
  for_keys(node, "gap",
           {{"bin_width", [&](const YAML::Node& n, const std::string& f) {
               g.bin_width = scalar<double>(n, f);
               positive(g.bin_width, n, f);
             }},
            {"liouvillian", [&](const YAML::Node& n, const std::string& f) { g.liouvillian = scalar<bool>(n, f); }},
            {"profile", [&](const YAML::Node& n, const std::string& f) { g.profile = scalar<bool>(n, f); }}});
}

void parse_trajectory(const YAML::Node& node, TrajectorySpec& t) {
  TrajectoryConfig& c = t.config;
  for_keys(node, "trajectory",
           {{"n_trajectories", [&](const YAML::Node& n, const std::string& f) {
               c.n_trajectories = scalar<int>(n, f);
               if (c.n_trajectories < 1) bad(n, f, "must be at least 1");
             }},
            {"t_max", [&](const YAML::Node& n, const std::string& f) {
               c.t_max = scalar<double>(n, f);
               nonnegative(c.t_max, n, f);
             }},
            {"dt_record", [&](const YAML::Node& n, const std::string& f) {
               c.dt_record = scalar<double>(n, f);
               positive(c.dt_record, n, f);
             }},
            {"tolerance", [&](const YAML::Node& n, const std::string& f) {
               c.integrator_tolerance = scalar<double>(n, f);
               positive(c.integrator_tolerance, n, f);
             }},
            {"integrator", [&](const YAML::Node& n, const std::string& f) { c.integrator = parse_integrator(n, f); }},
            {"n_resamples", [&](const YAML::Node& n, const std::string& f) {
               t.n_resamples = scalar<int>(n, f);
               if (t.n_resamples < 0 || t.n_resamples == 1) bad(n, f, "must be 0 (no bootstrap) or at least 2");
             }},
            {"initial", [&](const YAML::Node& n, const std::string& f) {
               t.initial = scalar<std::string>(n, f);
               if (t.initial != "haar" && t.initial != "product") bad(n, f, "expected haar or product");
             }},
            {"fit_window", [&](const YAML::Node& n, const std::string& f) {
               if (n.IsNull()) return;
               auto w = scalar_or_list<double>(n, f);
               if (w.size() != 2 || !(w[0] < w[1])) bad(n, f, "expected [t_lo, t_hi] with t_lo < t_hi");
               t.fit_window = std::make_pair(w[0], w[1]);
             }},
            {"dump_raw", [&](const YAML::Node& n, const std::string& f) { t.dump_raw = scalar<bool>(n, f); }}});
}

void parse_scan(const YAML::Node& node, ScanSpec& s) {
  for_keys(node, "scan",
           {{"alpha", [&](const YAML::Node& n, const std::string& f) {
               s.alpha = scalar_or_list<double>(n, f);
               for (double a : s.alpha) nonnegative(a, n, f);
             }},
            {"gamma", [&](const YAML::Node& n, const std::string& f) {
               s.gamma = scalar_or_list<double>(n, f);
               for (double g : s.gamma) positive(g, n, f);
             }}});
}

void parse_steer(const YAML::Node& node, SteerSpec& s) {
  for_keys(node, "steer",
           {{"targets", [&](const YAML::Node& n, const std::string& f) {
               s.targets = scalar_or_list<std::string>(n, f);
               for (const auto& t : s.targets)
                 if (t != "ghz" && t != "w" && t != "product" && t != "aklt" && t != "mg_minus")
                   bad(n, f, "unknown target '" + t + "'");
             }},
            {"link", [&](const YAML::Node& n, const std::string& f) {
               s.link = scalar<int>(n, f);
               if (s.link < 1) bad(n, f, "links are 1-based");
             }},
            {"lie_closure", [&](const YAML::Node& n, const std::string& f) { s.lie_closure = scalar<bool>(n, f); }},
            {"max_generations", [&](const YAML::Node& n, const std::string& f) {
               s.max_generations = scalar<int>(n, f);
               if (s.max_generations < 1) bad(n, f, "must be at least 1");
             }},
            {"delta_h_samples", [&](const YAML::Node& n, const std::string& f) {
               s.delta_h_samples = scalar<int>(n, f);
               if (s.delta_h_samples < 0) bad(n, f, "must be nonnegative");
             }},
            {"delta_h_norm", [&](const YAML::Node& n, const std::string& f) {
               s.delta_h_norm = scalar<double>(n, f);
               positive(s.delta_h_norm, n, f);
             }}});
}

void parse_regime(const YAML::Node& node, RegimeSpec& r) {
  auto num = [](double& slot) {
    return [&slot](const YAML::Node& n, const std::string& f) {
      slot = scalar<double>(n, f);
      positive(slot, n, f);
    };
  };
  for_keys(node, "regime", {{"L", num(r.L)}, {"ell", num(r.ell)}, {"gamma", num(r.gamma)}, {"D", num(r.D)}});
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string list(const std::vector<T>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>)
      out += fmt(v[i]);
    else if constexpr (std::is_same_v<T, std::string>)
      out += v[i];
    else
      out += std::to_string(v[i]);
  }
  return out + "]";
}

// Every field in a fixed order, defaults included, so equal configurations hash equally.
std::string canonical_text(const ExperimentConfig& c) {
  std::ostringstream o;
  const auto& m = c.model;
  const auto& t = c.trajectory;
  o << "task: " << to_string(c.task) << "\n"
    << "seed: " << c.seed << "\n"
    << "model:\n"
    << "  name: " << m.name << "\n"
    << "  n_sites: " << list(m.n_sites) << "\n"
    << "  gamma: " << fmt(m.gamma) << "\n"
    << "  cooled_links: " << list(m.cooled_links) << "\n"
    << "  target: " << m.target << "\n"
    << "  boundary: " << m.boundary << "\n";
  if (m.delta_h) {
    o << "  delta_h:\n";
    if (m.delta_h->random)
      o << "    random_seed: " << m.delta_h->random_seed << "\n    norm: " << fmt(m.delta_h->norm) << "\n";
    else
      o << "    links: " << list(m.delta_h->links) << "\n    alpha: " << fmt(m.delta_h->alpha) << "\n";
  }
  o << "gap:\n"
    << "  bin_width: " << fmt(c.gap.bin_width) << "\n"
    << "  liouvillian: " << (c.gap.liouvillian ? "true" : "false") << "\n"
    << "  profile: " << (c.gap.profile ? "true" : "false") << "\n"
    << "trajectory:\n"
    << "  n_trajectories: " << t.config.n_trajectories << "\n"
    << "  t_max: " << fmt(t.config.t_max) << "\n"
    << "  dt_record: " << fmt(t.config.dt_record) << "\n"
    << "  tolerance: " << fmt(t.config.integrator_tolerance) << "\n"
    << "  integrator: " << dilute::to_string(t.config.integrator) << "\n"
    << "  n_resamples: " << t.n_resamples << "\n"
    << "  initial: " << t.initial << "\n";
  if (t.fit_window) o << "  fit_window: [" << fmt(t.fit_window->first) << ", " << fmt(t.fit_window->second) << "]\n";
  o << "  dump_raw: " << (t.dump_raw ? "true" : "false") << "\n"
    << "scan:\n"
    << "  alpha: " << list(c.scan.alpha) << "\n"
    << "  gamma: " << list(c.scan.gamma) << "\n"
    << "steer:\n"
    << "  targets: " << list(c.steer.targets) << "\n"
    << "  link: " << c.steer.link << "\n"
    << "  lie_closure: " << (c.steer.lie_closure ? "true" : "false") << "\n"
    << "  max_generations: " << c.steer.max_generations << "\n"
    << "  delta_h_samples: " << c.steer.delta_h_samples << "\n"
    << "  delta_h_norm: " << fmt(c.steer.delta_h_norm) << "\n";
  if (c.task == Task::regime)
    o << "regime:\n"
      << "  L: " << fmt(c.regime.L) << "\n"
      << "  ell: " << fmt(c.regime.ell) << "\n"
      << "  gamma: " << fmt(c.regime.gamma) << "\n"
      << "  D: " << fmt(c.regime.D) << "\n";
  return o.str();
}

}  // namespace

const char* to_string(Task task) {
  switch (task) {
    case Task::gap: return "gap";
    case Task::traject: return "traject";
    case Task::steer: return "steer";
    case Task::scan: return "scan";
    case Task::regime: return "regime";
  }
  return "unknown";
}

YAML::Node load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_config_string(buf.str());
}

YAML::Node load_config_string(const std::string& text) {
  try {
    YAML::Node root = YAML::Load(text);
    if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    return root;
  } catch (const YAML::ParserException& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ", column " + std::to_string(e.mark.column + 1) +
                      ": " + e.msg);
  }
}

void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "': expected key=value");
  const std::string path = assignment.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(assignment.substr(eq + 1));
  } catch (const YAML::ParserException& e) {
    throw ConfigError("override '" + assignment + "': " + e.msg);
  }
  std::vector<std::string> keys;
  std::stringstream ss(path);
  for (std::string k; std::getline(ss, k, '.');) {
    if (k.empty()) throw ConfigError("override '" + assignment + "': empty key segment");
    keys.push_back(k);
  }
  // yaml-cpp nodes are handles, so descending by reassignment would rebind rather than
  // write; recurse and write each level back instead.
  std::function<void(YAML::Node, std::size_t)> set = [&](YAML::Node node, std::size_t i) {
    if (i + 1 == keys.size()) {
      node[keys[i]] = value;
      return;
    }
    YAML::Node child = node[keys[i]];
    if (!child.IsDefined() || child.IsNull()) child = YAML::Node(YAML::NodeType::Map);
    if (!child.IsMap()) throw ConfigError("override '" + assignment + "': '" + keys[i] + "' is not a table");
    set(child, i + 1);
    node[keys[i]] = child;
  };
  if (!root.IsMap()) root = YAML::Node(YAML::NodeType::Map);
  set(root, 0);
}

ExperimentConfig parse_config(const YAML::Node& root) {
  ExperimentConfig c;
  for_keys(root, "",
           {{"task", [&](const YAML::Node& n, const std::string& f) { c.task = parse_task(n, f); }},
            {"seed", [&](const YAML::Node& n, const std::string& f) { c.seed = scalar<std::uint64_t>(n, f); }},
            {"output", [&](const YAML::Node& n, const std::string& f) { c.output_dir = scalar<std::string>(n, f); }},
            {"threads", [&](const YAML::Node& n, const std::string& f) {
               c.threads = scalar<int>(n, f);
               if (c.threads < 0) bad(n, f, "must be nonnegative");
             }},
            {"model", [&](const YAML::Node& n, const std::string&) { parse_model(n, c.model); }},
            {"gap", [&](const YAML::Node& n, const std::string&) { parse_gap(n, c.gap); }},
            {"trajectory", [&](const YAML::Node& n, const std::string&) { parse_trajectory(n, c.trajectory); }},
            {"scan", [&](const YAML::Node& n, const std::string&) { parse_scan(n, c.scan); }},
            {"steer", [&](const YAML::Node& n, const std::string&) { parse_steer(n, c.steer); }},
            {"regime", [&](const YAML::Node& n, const std::string&) { parse_regime(n, c.regime); }}});
  if (!root["model"]) parse_model(YAML::Node(YAML::NodeType::Map), c.model);
  if (c.task == Task::regime && (c.regime.L <= 0 || c.regime.ell <= 0 || c.regime.gamma <= 0 || c.regime.D <= 0))
    throw ConfigError("field 'regime': L, ell, gamma and D are required for task regime");
  c.trajectory.config.seed = c.seed;
  c.trajectory.config.n_threads = c.threads;
  c.canonical = canonical_text(c);
  c.hash = fnv1a(c.canonical);
  return c;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace dilute::app
