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

#include "otafl/harness/experiment.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "otafl/harness/calibration_io.hpp"
#include "otafl/idx.hpp"

namespace otafl::harness {

using orchestrator::AlgorithmKind;

std::uint64_t trial_seed(std::uint64_t master, int trial) {
  return derive_seed(master, {static_cast<std::uint64_t>(trial)});
}

std::uint64_t calibration_seed(std::uint64_t master, AlgorithmKind mirror) {
  return derive_seed(master, {hash_string("calibration"),
                              static_cast<std::uint64_t>(mirror)});
}

PreparedTask prepare_task(const ExperimentConfig& cfg) {
  PreparedTask out;
  const std::uint64_t data_seed = derive_seed(cfg.seed, {hash_string("data")});
  if (cfg.task.source == TaskSource::kSynthetic) {
    out.data = tasks::gen_synthetic(cfg.task.synthetic, data_seed);
  } else {
    const std::string dir = resolve_data_dir(cfg.task);
    const tasks::UserDataset train = tasks::load_mnist_dir(dir, true);
    const Eigen::Index want =
        static_cast<Eigen::Index>(cfg.task.num_users) * cfg.task.samples_per_user;
    require(want <= train.size(), "not enough MNIST training samples",
            ErrorCode::kInsufficientData);
    Rng rng = make_rng(data_seed, Stream::kSubsample);
    const tasks::UserDataset subset = tasks::subsample(train, want, rng);
    const std::uint64_t part_seed = mix_seed(data_seed, 1);
    out.data = cfg.task.partition == Partition::kBalanced
                   ? tasks::partition_balanced(subset, cfg.task.num_users,
                                               part_seed, 10, cfg.task.l2)
                   : tasks::partition_imbalanced(subset, cfg.task.num_users,
                                                 cfg.task.skew_frac, part_seed,
                                                 10, cfg.task.l2);
    out.test = tasks::load_mnist_dir(dir, false);
  }
  out.optimum = tasks::global_optimum(out.data);
  if (cfg.weighted_output) {
    if (out.data.kind == tasks::TaskKind::kLinearRegression) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
          tasks::regression_hessian(out.data), Eigen::EigenvaluesOnly);
      out.mu_strong = eig.eigenvalues().minCoeff();
    } else {
      out.mu_strong = out.data.l2;
    }
  }
  return out;
}

CalibrationSet prepare_calibrations(const ExperimentConfig& cfg,
                                    const PreparedTask& task) {
  std::set<AlgorithmKind> mirrors;
  for (auto a : cfg.algorithms)
    if (orchestrator::uses_time_varying_precoder(a))
      mirrors.insert(orchestrator::calibration_mirror(a));
  CalibrationSet out;
  if (mirrors.empty()) return out;
  if (!cfg.calibration.reuse_path.empty()) {
    const CalibrationFile file = read_calibration(cfg.calibration.reuse_path);
    for (auto m : mirrors) {
      auto it = file.calibrations.find(m);
      require(it != file.calibrations.end(),
              cfg.calibration.reuse_path + " has no calibration for " +
                  orchestrator::algorithm_name(m),
              ErrorCode::kConfig);
      out.emplace(m, it->second);
    }
    return out;
  }
  orchestrator::CalibrationOptions opts;
  opts.frac = cfg.calibration.frac;
  opts.trials = cfg.calibration.trials;
  for (auto m : mirrors)
    out.emplace(m, orchestrator::calibrate(task.data, cfg.settings, m, opts,
                                           calibration_seed(cfg.seed, m)));
  return out;
}

const std::vector<orchestrator::TrialResult>& ExperimentResult::of(
    AlgorithmKind kind) const {
  for (std::size_t a = 0; a < config.algorithms.size(); ++a)
    if (config.algorithms[a] == kind) return trials[a];
  fail(ErrorCode::kInvalidArgument,
       std::string("algorithm not in experiment: ") +
           orchestrator::algorithm_name(kind));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const PreparedTask task = prepare_task(cfg);
  return run_experiment(cfg, task);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const PreparedTask& task) {
  return run_experiment(cfg, task, prepare_calibrations(cfg, task));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const PreparedTask& task,
                                const CalibrationSet& calibrations) {
  cfg.validate();
  require(static_cast<int>(task.data.num_users()) == cfg.task.num_users,
          "prepared task does not match the configured user count",
          ErrorCode::kConfig);
  ExperimentResult res;
  res.config = cfg;
  res.hash = config_hash(cfg);
  res.calibrations = calibrations;
  res.f_star = task.optimum.f_star;
  for (int t = 0; t < cfg.trials; ++t)
    res.trial_seeds.push_back(trial_seed(cfg.seed, t));
  const std::size_t num_algs = cfg.algorithms.size();
  res.trials.assign(num_algs, std::vector<orchestrator::TrialResult>(
                                  static_cast<std::size_t>(cfg.trials)));

  std::vector<orchestrator::RunContext> contexts(num_algs);
  for (std::size_t a = 0; a < num_algs; ++a) {
    auto& ctx = contexts[a];
    ctx.data = &task.data;
    ctx.optimum = &task.optimum;
    ctx.test = task.test ? &*task.test : nullptr;
    ctx.settings = cfg.settings;
    ctx.settings.mu_strong = task.mu_strong;
    const AlgorithmKind kind = cfg.algorithms[a];
    if (orchestrator::uses_time_varying_precoder(kind))
      ctx.calibration =
          &res.calibrations.at(orchestrator::calibration_mirror(kind));
  }

  const std::size_t jobs = num_algs * static_cast<std::size_t>(cfg.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs) return;
      const std::size_t a = j % num_algs;
      const std::size_t t = j / num_algs;
      try {
        res.trials[a][t] = orchestrator::run_trial(
            cfg.algorithms[a], contexts[a], res.trial_seeds[t]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(jobs);
      }
    }
  };
  const int threads =
      std::max(1, std::min<int>(cfg.workers, static_cast<int>(jobs)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return res;
}

}  // namespace otafl::harness
