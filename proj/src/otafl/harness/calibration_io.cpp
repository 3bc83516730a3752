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

#include "otafl/harness/calibration_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace otafl::harness {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json per_user(const orchestrator::Calibration& c,
              double priors::PriorMoments::*field) {
  json rows = json::array();
  for (const auto& round : c.priors.rounds) {
    json row = json::array();
    for (const auto& u : round) row.push_back(u.*field);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

json calibration_to_json(const CalibrationFile& file) {
  json tables = json::object();
  for (const auto& [kind, c] : file.calibrations) {
    tables[orchestrator::algorithm_name(kind)] = {
        {"rounds", c.table.rounds_covered()},
        {"extension_rule", "hold_last"},
        {"m_theta", c.table.m_theta},
        {"m_c", c.table.m_c},
        {"mu", per_user(c, &priors::PriorMoments::mu)},
        {"sigma2", per_user(c, &priors::PriorMoments::sigma2)},
        {"b", per_user(c, &priors::PriorMoments::b)},
        {"v2", per_user(c, &priors::PriorMoments::v2)}};
  }
  return {{"format", "otafl-calibration"},
          {"version", kFormatVersion},
          {"config_hash", file.config_hash},
          {"seed", file.seed},
          {"calibrations", tables}};
}

CalibrationFile calibration_from_json(const json& doc) {
  CalibrationFile out;
  try {
    require(doc.value("format", "") == "otafl-calibration",
            "not a calibration document", ErrorCode::kConfig);
    require(doc.at("version").get<int>() == kFormatVersion,
            "unsupported calibration version", ErrorCode::kConfig);
    out.config_hash = doc.at("config_hash").get<std::string>();
    out.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& item : doc.at("calibrations").items()) {
      const auto kind = orchestrator::parse_algorithm(item.key());
      require(kind.has_value(), "unknown calibration mirror " + item.key(),
              ErrorCode::kConfig);
      const json& t = item.value();
      orchestrator::Calibration c;
      c.mirror = *kind;
      c.table.m_theta = t.at("m_theta").get<std::vector<double>>();
      c.table.m_c = t.at("m_c").get<std::vector<double>>();
      c.table.validate();
      const auto mu = t.at("mu").get<std::vector<std::vector<double>>>();
      const auto s2 = t.at("sigma2").get<std::vector<std::vector<double>>>();
      const auto b = t.at("b").get<std::vector<std::vector<double>>>();
      const auto v2 = t.at("v2").get<std::vector<std::vector<double>>>();
      require(mu.size() == c.table.m_theta.size() && s2.size() == mu.size() &&
                  b.size() == mu.size() && v2.size() == mu.size(),
              "prior arrays do not match the table length", ErrorCode::kConfig);
      for (std::size_t r = 0; r < mu.size(); ++r) {
        require(s2[r].size() == mu[r].size() && b[r].size() == mu[r].size() &&
                    v2[r].size() == mu[r].size() && !mu[r].empty(),
                "ragged prior arrays", ErrorCode::kConfig);
        std::vector<priors::PriorMoments> row;
        for (std::size_t i = 0; i < mu[r].size(); ++i) {
          require(s2[r][i] >= 0 && v2[r][i] >= 0, "negative prior variance",
                  ErrorCode::kConfig);
          row.push_back({mu[r][i], s2[r][i], b[r][i], v2[r][i]});
        }
        c.priors.rounds.push_back(std::move(row));
      }
      out.calibrations.emplace(*kind, std::move(c));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kConfig, std::string("malformed calibration: ") + e.what());
  }
  return out;
}

void write_calibration(const std::string& path, const CalibrationFile& file) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot write " + path, ErrorCode::kIo);
  out << calibration_to_json(file).dump(1) << '\n';
  require(static_cast<bool>(out), "write failed for " + path, ErrorCode::kIo);
}

CalibrationFile read_calibration(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot read calibration file " + path,
          ErrorCode::kConfig);
  std::stringstream ss;
  ss << in.rdbuf();
  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kConfig, path + ": " + e.what());
  }
  return calibration_from_json(doc);
}

}  // namespace otafl::harness
