/*
 * Copyright 2026 The OTAFL Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "otafl/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "otafl/version.hpp"

namespace otafl::harness {
namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) {
  return v ? num(*v) : "null";
}

json opt_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
}

void write_text(const std::string& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot write " + path, ErrorCode::kIo);
  out << text;
  out.close();
  require(!out.fail(), "write failed for " + path, ErrorCode::kIo);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_num(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::kBadMagic, "bad number '" + s + "' in " + where);
  }
}

std::optional<double> parse_opt(const std::string& s, const std::string& where) {
  if (s == "null") return std::nullopt;
  return parse_num(s, where);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> ResultTable::algorithms() const {
  std::vector<std::string> out;
  for (const auto& r : rows)
    if (std::find(out.begin(), out.end(), r.algorithm) == out.end())
      out.push_back(r.algorithm);
  return out;
}

MeanSe mean_se(const std::vector<double>& values) {
  MeanSe out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  out.mean = sum / n;
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (n - 1) / n);
  }
  return out;
}

ResultTable summarize(const ExperimentResult& result) {
  ResultTable table;
  const auto& cfg = result.config;
  table.title = cfg.title.empty() ? cfg.name : cfg.title;
  json algs = json::object();
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    const std::string name = orchestrator::algorithm_name(cfg.algorithms[a]);
    const auto& trials = result.trials[a];
    const int rounds = cfg.settings.rounds;
    json control_power = json::array();
    for (int r = 0; r < rounds; ++r) {
      std::vector<double> gap, acc;
      double power = 0.0, cpower = 0.0, parts = 0.0;
      for (const auto& t : trials) {
        const auto& m = t.rounds[static_cast<std::size_t>(r)];
        gap.push_back(m.loss_gap);
        if (m.accuracy) acc.push_back(*m.accuracy);
        power += m.mean_tx_power;
        cpower += m.mean_control_power;
        parts += m.participants;
      }
      const double n = static_cast<double>(trials.size());
      ResultRow row;
      row.algorithm = name;
      row.round = r + 1;
      const MeanSe g = mean_se(gap);
      row.mean_loss_gap = g.mean;
      row.se_loss_gap = g.se;
      if (!acc.empty()) {
        const MeanSe s = mean_se(acc);
        row.mean_accuracy = s.mean;
        row.se_accuracy = s.se;
      }
      row.mean_tx_power = power / n;
      row.participants = parts / n;
      control_power.push_back(cpower / n);
      table.rows.push_back(row);
    }
    json finals = json::array(), weighted = json::array(), accs = json::array();
    for (const auto& t : trials) {
      finals.push_back(t.rounds.back().loss_gap);
      weighted.push_back(t.weighted_loss_gap);
      accs.push_back(opt_json(t.rounds.back().accuracy));
    }
    algs[name] = {{"final_loss_gap", finals},
                  {"final_accuracy", accs},
                  {"weighted_output_loss_gap", weighted},
                  {"mean_control_power", control_power}};
  }
  table.metadata = {{"format", "otafl-results"},
                    {"version", kVersion},
                    {"config", config_to_json(cfg)},
                    {"config_hash", result.hash},
                    {"seed", cfg.seed},
                    {"trial_seeds", result.trial_seeds},
                    {"f_star", result.f_star},
                    {"algorithms", algs}};
  return table;
}

std::string format_csv(const ResultTable& table) {
  require(!table.rows.empty(), "empty result table");
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : table.rows) {
    out += r.algorithm + ',' + std::to_string(r.round) + ',' +
           num(r.mean_loss_gap) + ',' + opt(r.se_loss_gap) + ',' +
           opt(r.mean_accuracy) + ',' + opt(r.se_accuracy) + ',' +
           num(r.mean_tx_power) + ',' + num(r.participants) + '\n';
  }
  return out;
}

void write_csv(const ResultTable& table, const std::string& path) {
  const std::string text = format_csv(table);
  write_text(path, text);
}

ResultTable read_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot read " + path, ErrorCode::kIo);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line == kCsvHeader,
          path + " does not start with the result header", ErrorCode::kBadMagic);
  ResultTable table;
  table.title = std::filesystem::path(path).stem().string();
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    const std::string where = path + ":" + std::to_string(lineno);
    require(cells.size() == 8, "expected 8 columns at " + where,
            ErrorCode::kBadMagic);
    ResultRow r;
    r.algorithm = cells[0];
    r.round = static_cast<int>(parse_num(cells[1], where));
    r.mean_loss_gap = parse_num(cells[2], where);
    r.se_loss_gap = parse_opt(cells[3], where);
    r.mean_accuracy = parse_opt(cells[4], where);
    r.se_accuracy = parse_opt(cells[5], where);
    r.mean_tx_power = parse_num(cells[6], where);
    r.participants = parse_num(cells[7], where);
    table.rows.push_back(r);
  }
  require(!table.rows.empty(), path + " has no data rows", ErrorCode::kBadMagic);
  return table;
}

void write_json(const ResultTable& table, const std::string& path) {
  require(!table.rows.empty(), "empty result table");
  write_text(path, table.metadata.dump(1) + "\n");
}

std::string render_svg(const ResultTable& table, PlotMetric metric) {
  require(!table.rows.empty(), "empty result table");
  if (metric == PlotMetric::kAuto) {
    const bool has_acc = std::any_of(table.rows.begin(), table.rows.end(),
                                     [](const ResultRow& r) { return r.mean_accuracy.has_value(); });
    metric = has_acc ? PlotMetric::kAccuracy : PlotMetric::kLossGap;
  }
  const bool log_y = metric == PlotMetric::kLossGap;
  auto value = [&](const ResultRow& r) -> std::optional<double> {
    if (log_y) {
      if (!(r.mean_loss_gap > 0) || !std::isfinite(r.mean_loss_gap))
        return std::nullopt;
      return std::log10(r.mean_loss_gap);
    }
    return r.mean_accuracy;
  };

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& r : table.rows) {
    const auto v = value(r);
    if (!v) continue;
    x_lo = std::min(x_lo, double(r.round));
    x_hi = std::max(x_hi, double(r.round));
    y_lo = std::min(y_lo, *v);
    y_hi = std::max(y_hi, *v);
  }
  require(std::isfinite(y_lo), "nothing to plot");
  if (log_y) {
    y_lo = std::floor(y_lo);
    y_hi = std::ceil(y_hi);
  }
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;

  const double w = 800, h = 500, left = 80, right = 200, top = 50, bottom = 60;
  const double pw = w - left - right, ph = h - top - bottom;
  auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto sy = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
    << "\" height=\"" << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << left + pw / 2 << "\" y=\"25\" text-anchor=\"middle\" "
    << "font-size=\"16\">" << escape(table.title) << "</text>\n";
  s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw
    << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  const int yticks = log_y ? static_cast<int>(y_hi - y_lo) : 5;
  for (int k = 0; k <= yticks; ++k) {
    const double y = y_lo + (y_hi - y_lo) * k / yticks;
    char label[32];
    if (log_y)
      std::snprintf(label, sizeof label, "1e%d", static_cast<int>(std::lround(y)));
    else
      std::snprintf(label, sizeof label, "%.3g", y);
    s << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << sy(y)
      << "\" y2=\"" << sy(y) << "\" stroke=\"#dddddd\"/>\n";
    s << "<text x=\"" << left - 6 << "\" y=\"" << sy(y) + 4
      << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  for (int k = 0; k <= 5; ++k) {
    const double x = x_lo + (x_hi - x_lo) * k / 5;
    s << "<text x=\"" << sx(x) << "\" y=\"" << top + ph + 18
      << "\" text-anchor=\"middle\">" << std::lround(x) << "</text>\n";
  }
  s << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 15
    << "\" text-anchor=\"middle\">round</text>\n";
  s << "<text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" "
    << "transform=\"rotate(-90 20 " << top + ph / 2 << ")\">"
    << (log_y ? "loss gap (log scale)" : "test accuracy") << "</text>\n";

  const auto names = table.algorithms();
  for (std::size_t a = 0; a < names.size(); ++a) {
    const char* color = colors[a % 8];
    s << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& r : table.rows) {
      if (r.algorithm != names[a]) continue;
      const auto v = value(r);
      if (v) s << sx(r.round) << ',' << sy(*v) << ' ';
    }
    s << "\"/>\n";
    const double ly = top + 15 + 20.0 * static_cast<double>(a);
    s << "<line x1=\"" << left + pw + 15 << "\" x2=\"" << left + pw + 40
      << "\" y1=\"" << ly << "\" y2=\"" << ly << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4 << "\">"
      << escape(names[a]) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_svg(const ResultTable& table, const std::string& path,
               PlotMetric metric) {
  const std::string text = render_svg(table, metric);
  write_text(path, text);
}

}  // namespace otafl::harness
