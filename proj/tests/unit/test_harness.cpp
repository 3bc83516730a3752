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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "otafl/harness/calibration_io.hpp"
#include "otafl/harness/config.hpp"
#include "otafl/harness/experiment.hpp"
#include "otafl/harness/presets.hpp"
#include "otafl/harness/report.hpp"
#include "test_util.hpp"

namespace otafl::harness {
namespace {

const char* kSmall = R"({
  "name": "small",
  "task": {"kind": "synthetic", "num_users": 4, "samples_per_user": 40, "dim": 3},
  "algorithms": ["fedavg_noiseless", "cotaf", "baaf", "cobaaf"],
  "local_steps": 3, "rounds": 15, "step_size": 0.01, "batch_size": 4,
  "snr_db": 10, "trials": 4, "seed": 5,
  "calibration": {"frac": 0.25, "trials": 3}
})";

ExperimentConfig small(int trials = 4, int workers = 1) {
  auto cfg = parse_config_text(kSmall);
  cfg.trials = trials;
  cfg.workers = workers;
  return cfg;
}

ErrorCode config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kRuntime;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Config, ParsesAndEchoesDefaults) {
  const auto cfg = small();
  EXPECT_EQ(cfg.name, "small");
  EXPECT_EQ(cfg.task.synthetic.num_users, 4);
  EXPECT_EQ(cfg.settings.rounds, 15);
  EXPECT_DOUBLE_EQ(cfg.settings.channel.resolved_noise_var(), 0.1);
  const auto echo = config_to_json(cfg);
  EXPECT_TRUE(echo.contains("init_std"));
  EXPECT_TRUE(echo.contains("refresh_at_local"));
  const auto back = parse_config(echo);
  EXPECT_EQ(config_hash(back), config_hash(cfg));
}

TEST(Config, UnknownKeysAndBadValuesAreConfigErrors) {
  EXPECT_EQ(config_error(R"({"algorithms": ["baaf"], "roundz": 3})"),
            ErrorCode::kConfig);
  EXPECT_EQ(config_error(R"({"algorithms": ["baaf"], "task": {"kind": "synthetic", "dims": 3}})"),
            ErrorCode::kConfig);
  EXPECT_EQ(config_error(R"({"algorithms": ["fedprox"]})"), ErrorCode::kConfig);
  EXPECT_EQ(config_error(R"({"algorithms": ["baaf"], "rounds": -1})"),
            ErrorCode::kConfig);
  EXPECT_EQ(config_error(R"({"algorithms": ["baaf"], "snr_db": 10, "noise_var": 1})"),
            ErrorCode::kConfig);
  EXPECT_EQ(config_error("{not json"), ErrorCode::kConfig);
  try {
    parse_config_text(R"({"algorithms": ["baaf"], "roundz": 3})");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("roundz"), std::string::npos);
  }
}

TEST(Config, MissingFile) {
  EXPECT_THROW(load_config(otafl::testing::temp_path("absent.json")), Error);
}

TEST(Config, HashIgnoresSchedulingFields) {
  auto a = small();
  auto b = small();
  b.workers = 7;
  b.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.seed = 6;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Presets, AllParse) {
  for (const auto& name : preset_names()) {
    const auto cfg = preset(name);
    EXPECT_NO_THROW(cfg.validate()) << name;
    EXPECT_EQ(preset(name, true).trials, 100) << name;
  }
  EXPECT_THROW(preset("fig9"), Error);
  const auto f1 = preset("fig1");
  EXPECT_EQ(f1.task.synthetic.num_users, 20);
  EXPECT_EQ(f1.settings.local_steps, 10);
  EXPECT_EQ(f1.settings.rounds, 200);
  EXPECT_EQ(f1.trials, 20);
  EXPECT_EQ(preset("fig2").task.synthetic.num_users, 200);
  EXPECT_EQ(preset("fig3").settings.local_steps, 20);
}

TEST(Report, MeanAndStandardError) {
  const auto one = mean_se({3.0});
  EXPECT_DOUBLE_EQ(one.mean, 3.0);
  EXPECT_FALSE(one.se.has_value());
  const auto two = mean_se({1.0, 3.0});
  EXPECT_DOUBLE_EQ(two.mean, 2.0);
  EXPECT_DOUBLE_EQ(*two.se, 1.0);
}

TEST(Report, EmptyTableIsRejected) {
  ResultTable t;
  EXPECT_THROW(format_csv(t), Error);
}

TEST(Experiment, CsvIsByteDeterministicAcrossRunsAndWorkers) {
  const auto a = format_csv(summarize(run_experiment(small(4, 1))));
  const auto b = format_csv(summarize(run_experiment(small(4, 1))));
  const auto c = format_csv(summarize(run_experiment(small(4, 3))));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_EQ(a.substr(0, a.find('\n')), kCsvHeader);
}

TEST(Experiment, SingleTrialHasNullStandardError) {
  const auto table = summarize(run_experiment(small(1)));
  for (const auto& row : table.rows) EXPECT_FALSE(row.se_loss_gap.has_value());
  const auto csv = format_csv(table);
  EXPECT_NE(csv.find(",null,"), std::string::npos);
}

TEST(Experiment, CsvRoundTrip) {
  const auto table = summarize(run_experiment(small(3)));
  const std::string path = otafl::testing::temp_path("roundtrip.csv");
  write_csv(table, path);
  const auto back = read_csv(path);
  ASSERT_EQ(back.rows.size(), table.rows.size());
  EXPECT_EQ(format_csv(back), format_csv(table));
  EXPECT_EQ(slurp(path), format_csv(table));
  EXPECT_EQ(back.algorithms(), table.algorithms());
}

TEST(Experiment, SidecarCarriesPerTrialFinals) {
  const auto result = run_experiment(small(3));
  const auto table = summarize(result);
  const auto& meta = table.metadata;
  ASSERT_TRUE(meta.contains("config"));
  EXPECT_EQ(meta.at("trial_seeds").size(), 3u);
  const auto& finals = meta.at("algorithms").at("baaf").at("final_loss_gap");
  ASSERT_EQ(finals.size(), 3u);
  for (std::size_t t = 0; t < 3; ++t)
    EXPECT_DOUBLE_EQ(finals[t].get<double>(),
                     result.of(orchestrator::AlgorithmKind::kBaaf)[t].rounds.back().loss_gap);
  const std::string svg = render_svg(table);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("cobaaf"), std::string::npos);
}

TEST(Experiment, StandardErrorShrinksWithTrials) {
  auto avg_se = [](const ResultTable& t) {
    double s = 0.0;
    int n = 0;
    for (const auto& row : t.rows)
      if (row.algorithm == "cotaf" && row.round > 5) {
        s += *row.se_loss_gap;
        ++n;
      }
    return s / n;
  };
  const double se10 = avg_se(summarize(run_experiment(small(10))));
  const double se40 = avg_se(summarize(run_experiment(small(40))));
  EXPECT_NEAR(se40 / se10, 0.5, 0.5 * 0.2);
}

TEST(Calibration, FileRoundTripAndReuse) {
  const auto cfg = small(2);
  const auto task = prepare_task(cfg);
  const auto cals = prepare_calibrations(cfg, task);
  ASSERT_EQ(cals.size(), 2u);
  CalibrationFile file{config_hash(cfg), cfg.seed, cals};
  const std::string path = otafl::testing::temp_path("cal.json");
  write_calibration(path, file);
  const auto back = read_calibration(path);
  EXPECT_EQ(back.config_hash, file.config_hash);
  for (const auto& [kind, cal] : cals) {
    const auto& other = back.calibrations.at(kind);
    EXPECT_EQ(other.table.m_theta, cal.table.m_theta);
    EXPECT_EQ(other.table.m_c, cal.table.m_c);
    EXPECT_EQ(other.priors.rounds[3][1].sigma2, cal.priors.rounds[3][1].sigma2);
  }
  auto reuse = cfg;
  reuse.calibration.reuse_path = path;
  EXPECT_EQ(format_csv(summarize(run_experiment(reuse))),
            format_csv(summarize(run_experiment(cfg))));
  std::ofstream(otafl::testing::temp_path("bad_cal.json")) << R"({"format": "x"})";
  EXPECT_THROW(read_calibration(otafl::testing::temp_path("bad_cal.json")), Error);
}

TEST(Experiment, SeedsAreDistinctPerTrial) {
  EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
  EXPECT_NE(trial_seed(1, 0), trial_seed(2, 0));
  EXPECT_NE(calibration_seed(1, orchestrator::AlgorithmKind::kFedAvgNoiseless),
            calibration_seed(1, orchestrator::AlgorithmKind::kScaffoldNoiseless));
}

}  // namespace
}  // namespace otafl::harness
