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

#ifndef OTAFL_HARNESS_CONFIG_HPP_
#define OTAFL_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "otafl/orchestrator.hpp"
#include "otafl/tasks.hpp"

namespace otafl::harness {

enum class TaskSource { kSynthetic, kMnist };
enum class Partition { kBalanced, kImbalanced };

struct TaskSpec {
  TaskSource source = TaskSource::kSynthetic;
  tasks::SyntheticConfig synthetic;
  int num_users = 20;
  int samples_per_user = 100;
  std::string data_dir;  // empty means OTAFL_DATA_DIR
  Partition partition = Partition::kBalanced;
  double skew_frac = 0.2;
  double l2 = 1e-4;
};

struct CalibrationSpec {
  double frac = 0.2;
  int trials = 20;
  std::string reuse_path;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string title;
  TaskSpec task;
  std::vector<orchestrator::AlgorithmKind> algorithms;
  orchestrator::AlgorithmSettings settings;
  bool weighted_output = true;
  int trials = 20;
  std::uint64_t seed = 1;
  int workers = 1;
  CalibrationSpec calibration;
  std::string output_dir = "out";

  void validate() const;
};

// Parses a config document; unknown keys and bad values raise
// ErrorCode::kConfig with the offending field named.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Complete echo with every default spelled out.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

// Hash over the fields that influence results (not workers/output_dir).
std::string config_hash(const ExperimentConfig& cfg);

std::string resolve_data_dir(const TaskSpec& task);

}  // namespace otafl::harness

#endif  // OTAFL_HARNESS_CONFIG_HPP_
