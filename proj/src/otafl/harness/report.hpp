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

#ifndef OTAFL_HARNESS_REPORT_HPP_
#define OTAFL_HARNESS_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "otafl/harness/experiment.hpp"

namespace otafl::harness {

inline constexpr const char* kCsvHeader =
    "algorithm,round,mean_loss_gap,se_loss_gap,mean_accuracy,se_accuracy,"
    "mean_tx_power,participants";

struct ResultRow {
  std::string algorithm;
  int round = 0;
  double mean_loss_gap = 0.0;
  std::optional<double> se_loss_gap;
  std::optional<double> mean_accuracy;
  std::optional<double> se_accuracy;
  double mean_tx_power = 0.0;
  double participants = 0.0;
};

struct ResultTable {
  std::string title;
  std::vector<ResultRow> rows;
  nlohmann::json metadata;  // config echo and per-trial finals

  std::vector<std::string> algorithms() const;
};

struct MeanSe {
  double mean = 0.0;
  std::optional<double> se;  // undefined for a single sample
};
MeanSe mean_se(const std::vector<double>& values);

ResultTable summarize(const ExperimentResult& result);

std::string format_csv(const ResultTable& table);
void write_csv(const ResultTable& table, const std::string& path);
ResultTable read_csv(const std::string& path);
void write_json(const ResultTable& table, const std::string& path);

enum class PlotMetric { kAuto, kLossGap, kAccuracy };
std::string render_svg(const ResultTable& table,
                       PlotMetric metric = PlotMetric::kAuto);
void write_svg(const ResultTable& table, const std::string& path,
               PlotMetric metric = PlotMetric::kAuto);

}  // namespace otafl::harness

#endif  // OTAFL_HARNESS_REPORT_HPP_
