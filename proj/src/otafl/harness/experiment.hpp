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

#ifndef OTAFL_HARNESS_EXPERIMENT_HPP_
#define OTAFL_HARNESS_EXPERIMENT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "otafl/harness/config.hpp"
#include "otafl/orchestrator.hpp"

namespace otafl::harness {

struct PreparedTask {
  tasks::FederatedDataset data;
  tasks::GlobalOptimum optimum;
  std::optional<tasks::UserDataset> test;
  double mu_strong = 0.0;  // strong-convexity modulus of the objective
};

using CalibrationSet =
    std::map<orchestrator::AlgorithmKind, orchestrator::Calibration>;

PreparedTask prepare_task(const ExperimentConfig& cfg);

std::uint64_t trial_seed(std::uint64_t master, int trial);
std::uint64_t calibration_seed(std::uint64_t master,
                               orchestrator::AlgorithmKind mirror);

// Calibrations for every mirror the configured algorithms need, loaded from
// calibration.reuse_path when set.
CalibrationSet prepare_calibrations(const ExperimentConfig& cfg,
                                    const PreparedTask& task);

struct ExperimentResult {
  ExperimentConfig config;
  std::string hash;
  std::vector<std::uint64_t> trial_seeds;
  std::vector<std::vector<orchestrator::TrialResult>> trials;  // [alg][trial]
  CalibrationSet calibrations;
  double f_star = 0.0;

  const std::vector<orchestrator::TrialResult>& of(
      orchestrator::AlgorithmKind kind) const;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const PreparedTask& task);
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const PreparedTask& task,
                                const CalibrationSet& calibrations);

}  // namespace otafl::harness

#endif  // OTAFL_HARNESS_EXPERIMENT_HPP_
