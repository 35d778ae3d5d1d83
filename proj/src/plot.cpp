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


#include "dilute/app/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "dilute/app/output.hpp"
#include "dilute/statistics.hpp"

namespace dilute::app {

namespace {

namespace fs = std::filesystem;

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 72, kRight = 24, kTop = 36, kBottom = 56;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;

  double t(double v) const {
    if (log) return (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    return (v - lo) / (hi - lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (int e = static_cast<int>(std::floor(std::log10(lo))); e <= static_cast<int>(std::ceil(std::log10(hi))); ++e) {
        for (double m : {1.0, 2.0, 5.0}) {
          double v = m * std::pow(10.0, e);
          if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) out.push_back(v);
        }
      }
      return out;
    }
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) out.push_back(v == 0 ? 0 : v);
    return out;
  }
};

Axis fit_axis(const std::vector<double>& values, bool log) {
  Axis a;
  a.log = log;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v) || (log && v <= 0)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!std::isfinite(lo)) lo = hi = log ? 1.0 : 0.0;
  if (log) {
    if (hi <= lo) hi = lo * 10;
    a.lo = std::pow(10.0, std::floor(std::log10(lo) * 4) / 4);
    a.hi = std::pow(10.0, std::ceil(std::log10(hi) * 4) / 4);
  } else {
    if (hi <= lo) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    a.lo = lo - pad;
    a.hi = hi + pad;
  }
  return a;
}

class Svg {
 public:
  Svg(Axis x, Axis y, const std::string& title, const std::string& xlabel, const std::string& ylabel)
      : x_(x), y_(y) {
    body_ += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
    text(kWidth / 2, 22, title, "middle", 15);
    text(kLeft + plot_w() / 2, kHeight - 14, xlabel, "middle", 13);
    body_ += "<text x=\"18\" y=\"" + num(kTop + plot_h() / 2) + "\" font-size=\"13\" text-anchor=\"middle\" "
             "transform=\"rotate(-90 18 " + num(kTop + plot_h() / 2) + ")\">" + ylabel + "</text>\n";
    body_ += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(plot_w()) + "\" height=\"" +
             num(plot_h()) + "\" fill=\"none\" stroke=\"black\"/>\n";
  }

  static double plot_w() { return kWidth - kLeft - kRight; }
  static double plot_h() { return kHeight - kTop - kBottom; }
  double px(double v) const { return kLeft + x_.t(v) * plot_w(); }
  double py(double v) const { return kTop + (1 - y_.t(v)) * plot_h(); }

  void axes_ticks() {
    for (double v : x_.ticks()) {
      body_ += "<line x1=\"" + num(px(v)) + "\" y1=\"" + num(kTop + plot_h()) + "\" x2=\"" + num(px(v)) + "\" y2=\"" +
               num(kTop + plot_h() + 5) + "\" stroke=\"black\"/>\n";
      text(px(v), kTop + plot_h() + 19, tick_label(v), "middle", 11);
    }
    for (double v : y_.ticks()) {
      body_ += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py(v)) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
               num(py(v)) + "\" stroke=\"black\"/>\n";
      text(kLeft - 8, py(v) + 4, tick_label(v), "end", 11);
    }
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color, const std::string& dash = "") {
    std::string p;
    for (auto [x, y] : pts) {
      if (!std::isfinite(x) || !std::isfinite(y) || (y_.log && y <= 0) || (x_.log && x <= 0)) continue;
      p += num(px(x)) + "," + num(py(y)) + " ";
    }
    if (p.empty()) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"" +
             (dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\"") + " points=\"" + p + "\"/>\n";
  }

  void markers(const std::vector<std::pair<double, double>>& pts, const std::string& color, bool square) {
    for (auto [x, y] : pts) {
      if (!std::isfinite(x) || !std::isfinite(y) || (y_.log && y <= 0) || (x_.log && x <= 0)) continue;
      if (square)
        body_ += "<rect x=\"" + num(px(x) - 4) + "\" y=\"" + num(py(y) - 4) + "\" width=\"8\" height=\"8\" fill=\"" +
                 color + "\"/>\n";
      else
        body_ += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"4\" fill=\"" + color + "\"/>\n";
    }
  }

  void legend(int slot, const std::string& color, const std::string& label) {
    const double y = kTop + 16 + 16 * slot;
    body_ += "<line x1=\"" + num(kLeft + plot_w() - 170) + "\" y1=\"" + num(y - 4) + "\" x2=\"" +
             num(kLeft + plot_w() - 150) + "\" y2=\"" + num(y - 4) + "\" stroke=\"" + color + "\" stroke-width=\"3\"/>\n";
    text(kLeft + plot_w() - 144, y, label, "start", 11);
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
             "\" fill=\"" + fill + "\"/>\n";
  }

  void text(double x, double y, const std::string& s, const char* anchor, int size) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + std::to_string(size) +
             "\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
  }

  std::string str() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" font-family=\"sans-serif\">\n" + body_ + "</svg>\n";
  }

 private:
  Axis x_, y_;
  std::string body_;
};

std::optional<double> parse_cell(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) return std::nullopt;
  return v;
}

// Values of the named columns, rows with any missing cell dropped. Empty on missing columns.
std::optional<std::vector<std::vector<double>>> columns(const CsvData& csv, const std::vector<std::string>& names,
                                                        std::string& missing) {
  std::vector<std::size_t> idx;
  for (const auto& n : names) {
    auto c = csv.column(n);
    if (!c) {
      missing = n;
      return std::nullopt;
    }
    idx.push_back(*c);
  }
  std::vector<std::vector<double>> out(names.size());
  for (const auto& row : csv.rows) {
    std::vector<double> vals;
    for (std::size_t i : idx) {
      auto v = parse_cell(row[i]);
      if (!v) break;
      vals.push_back(*v);
    }
    if (vals.size() != idx.size()) continue;
    for (std::size_t k = 0; k < vals.size(); ++k) out[k].push_back(vals[k]);
  }
  return out;
}

std::string color_map(double t) {
  // Dark blue to yellow through teal.
  static const double stops[][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double f = t - i;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
  return buf;
}

void plot_gaps(const fs::path& dir, PlotResult& result) {
  const CsvData csv = read_csv((dir / "gaps.csv").string());
  std::string missing;
  auto est = columns(csv, {"N", "gap_estimate"}, missing);
  if (!est) {
    result.warnings.push_back("gaps.csv: missing column '" + missing + "', plot skipped");
    return;
  }
  std::vector<std::pair<double, double>> est_pts, gap_pts;
  for (std::size_t i = 0; i < (*est)[0].size(); ++i)
    if ((*est)[1][i] > 0) est_pts.emplace_back((*est)[0][i], (*est)[1][i]);
  if (auto g = columns(csv, {"N", "gap"}, missing))
    for (std::size_t i = 0; i < (*g)[0].size(); ++i)
      if ((*g)[1][i] > 0) gap_pts.emplace_back((*g)[0][i], (*g)[1][i]);
  if (est_pts.empty() && gap_pts.empty()) {
    result.warnings.push_back("gaps.csv: no positive gaps, plot skipped");
    return;
  }
  std::vector<double> xs, ys;
  for (auto [x, y] : est_pts) xs.push_back(x), ys.push_back(y);
  for (auto [x, y] : gap_pts) xs.push_back(x), ys.push_back(y);
  Svg svg(fit_axis(xs, true), fit_axis(ys, true), "Gap versus chain size", "N", "gap");
  svg.axes_ticks();
  svg.markers(est_pts, "#1f77b4", false);
  svg.markers(gap_pts, "#d62728", true);
  svg.legend(0, "#1f77b4", "estimate");
  if (!gap_pts.empty()) svg.legend(1, "#d62728", "exact");
  ParityFits fits = power_law_fit_by_parity(est_pts);
  int slot = 2;
  for (auto [fit, label, dash] : {std::tuple{fits.even, "even N fit", "6,3"}, std::tuple{fits.odd, "odd N fit", "2,3"}}) {
    if (!fit) continue;
    std::vector<std::pair<double, double>> line;
    const double lo = *std::min_element(xs.begin(), xs.end()), hi = *std::max_element(xs.begin(), xs.end());
    for (int k = 0; k <= 20; ++k) {
      const double n = lo * std::pow(hi / lo, k / 20.0);
      line.emplace_back(n, fit->m * std::pow(n, -fit->alpha));
    }
    svg.polyline(line, "#555555", dash);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s, alpha=%.3g", label, fit->alpha);
    svg.legend(slot++, "#555555", buf);
  }
  write_text((dir / "gap_vs_N.svg").string(), svg.str());
  result.written.push_back("gap_vs_N.svg");
}

void plot_trajectory(const fs::path& dir, const std::string& name, PlotResult& result) {
  const CsvData csv = read_csv((dir / name).string());
  std::string missing;
  auto cols = columns(csv, {"t", "ln_one_minus_overlap"}, missing);
  if (!cols) {
    result.warnings.push_back(name + ": missing column '" + missing + "', plot skipped");
    return;
  }
  if ((*cols)[0].empty()) {
    result.warnings.push_back(name + ": no rows, plot skipped");
    return;
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < (*cols)[0].size(); ++i) pts.emplace_back((*cols)[0][i], (*cols)[1][i]);
  const std::string stem = fs::path(name).stem().string();
  Svg svg(fit_axis((*cols)[0], false), fit_axis((*cols)[1], false), stem, "t", "ln(1 - overlap)");
  svg.axes_ticks();
  svg.polyline(pts, "#1f77b4");
  svg.legend(0, "#1f77b4", "ensemble mean");

  const std::string suffix = stem.substr(std::string("trajectory_").size());
  const fs::path fit_path = dir / ("fit_" + suffix + ".json");
  if (fs::exists(fit_path)) {
    try {
      std::ifstream in(fit_path);
      Json fit = Json::parse(in);
      const double slope = fit.at("slope"), intercept = fit.at("intercept");
      const double lo = fit.at("window").at(0), hi = fit.at("window").at(1);
      svg.polyline({{lo, intercept + slope * lo}, {hi, intercept + slope * hi}}, "#d62728", "6,3");
      char buf[64];
      std::snprintf(buf, sizeof buf, "fit, gap=%.4g", -slope);
      svg.legend(1, "#d62728", buf);
    } catch (const std::exception& e) {
      result.warnings.push_back(fit_path.filename().string() + ": unreadable fit, overlay skipped");
    }
  }
  const std::string out = stem + ".svg";
  write_text((dir / out).string(), svg.str());
  result.written.push_back(out);
}

void plot_scan(const fs::path& dir, PlotResult& result) {
  const CsvData csv = read_csv((dir / "scan.csv").string());
  std::string missing;
  auto cols = columns(csv, {"alpha", "gamma", "gap"}, missing);
  if (!cols) {
    result.warnings.push_back("scan.csv: missing column '" + missing + "', plot skipped");
    return;
  }
  if ((*cols)[0].empty()) {
    result.warnings.push_back("scan.csv: no rows, plot skipped");
    return;
  }
  const std::set<double> alphas((*cols)[0].begin(), (*cols)[0].end());
  const std::set<double> gammas((*cols)[1].begin(), (*cols)[1].end());
  const std::vector<double> av(alphas.begin(), alphas.end()), gv(gammas.begin(), gammas.end());
  double gmax = 0;
  for (double g : (*cols)[2]) gmax = std::max(gmax, g);
  Axis x{-0.5, av.size() - 0.5, false}, y{-0.5, gv.size() - 0.5, false};
  Svg svg(x, y, "Liouvillian gap over (alpha, gamma)", "alpha", "gamma");
  const double cw = Svg::plot_w() / av.size(), ch = Svg::plot_h() / gv.size();
  for (std::size_t i = 0; i < (*cols)[0].size(); ++i) {
    const auto ia = std::distance(av.begin(), std::find(av.begin(), av.end(), (*cols)[0][i]));
    const auto ig = std::distance(gv.begin(), std::find(gv.begin(), gv.end(), (*cols)[1][i]));
    svg.rect(svg.px(ia) - cw / 2, svg.py(ig) - ch / 2, cw, ch, color_map(gmax > 0 ? (*cols)[2][i] / gmax : 0));
  }
  for (std::size_t i = 0; i < av.size(); ++i) svg.text(svg.px(i), kTop + Svg::plot_h() + 19, tick_label(av[i]), "middle", 11);
  for (std::size_t i = 0; i < gv.size(); ++i) svg.text(kLeft - 8, svg.py(i) + 4, tick_label(gv[i]), "end", 11);
  svg.text(kLeft + Svg::plot_w(), kTop - 6, "max gap " + tick_label(gmax), "end", 11);
  write_text((dir / "scan_heatmap.svg").string(), svg.str());
  result.written.push_back("scan_heatmap.svg");
}

}  // namespace

PlotResult render_plots(const std::string& dir_name) {
  PlotResult result;
  const fs::path dir(dir_name);
  if (!fs::is_directory(dir)) {
    result.warnings.push_back("'" + dir_name + "' is not a directory, nothing to plot");
    return result;
  }
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  for (const auto& name : names) {
    try {
      if (name == "gaps.csv")
        plot_gaps(dir, result);
      else if (name == "scan.csv")
        plot_scan(dir, result);
      else if (name.rfind("trajectory_", 0) == 0)
        plot_trajectory(dir, name, result);
    } catch (const std::exception& e) {
      result.warnings.push_back(name + ": " + e.what() + ", plot skipped");
    }
  }
  if (names.empty()) result.warnings.push_back("no CSV artifacts in '" + dir_name + "'");
  return result;
}

}  // namespace dilute::app
