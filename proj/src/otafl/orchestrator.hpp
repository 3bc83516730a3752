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

#ifndef OTAFL_ORCHESTRATOR_HPP_
#define OTAFL_ORCHESTRATOR_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otafl/channel.hpp"
#include "otafl/precoding.hpp"
#include "otafl/priors.hpp"
#include "otafl/rng.hpp"
#include "otafl/tasks.hpp"

namespace otafl::orchestrator {

enum class AlgorithmKind {
  kFedAvgNoiseless,
  kFedAvgNoisyConstAmp,
  kCotaf,
  kBaaf,
  kScaffoldNoiseless,
  kCobaaf,
  kCobaafFading,
};

const char* algorithm_name(AlgorithmKind kind);
std::optional<AlgorithmKind> parse_algorithm(const std::string& name);
std::vector<AlgorithmKind> all_algorithms();

bool uses_controls(AlgorithmKind kind);
bool uses_time_varying_precoder(AlgorithmKind kind);
bool uses_mmse(AlgorithmKind kind);
bool is_noisy(AlgorithmKind kind);
// Noiseless algorithm whose dynamics calibrate the precoders of `kind`.
AlgorithmKind calibration_mirror(AlgorithmKind kind);

// Precoder table together with the prior moments from the same offline runs.
struct Calibration {
  precoding::CalibrationTable table;
  priors::PriorTable priors;
  AlgorithmKind mirror = AlgorithmKind::kFedAvgNoiseless;
};

struct AlgorithmSettings {
  int local_steps = 10;
  int rounds = 200;
  double step_size = 1e-2;
  int batch_size = 10;
  int refresh_batch = 0;  // 0 means local_steps * batch_size
  channel::ChannelConfig channel;
  int participants = 0;   // fading mode; 0 means all users
  bool refresh_at_local = false;
  double init_std = 1.0;
  double mu_strong = 0.0;  // output schedule; 0 disables weighting

  int resolved_refresh_batch() const {
    return refresh_batch > 0 ? refresh_batch : local_steps * batch_size;
  }
  void validate(int num_users) const;
};

struct RoundMetrics {
  int round = 0;
  double loss_gap = 0.0;
  std::optional<double> accuracy;
  double mean_tx_power = 0.0;
  double mean_control_power = 0.0;
  int participants = 0;
  double wallclock_s = 0.0;
};

struct TrialResult {
  std::vector<RoundMetrics> rounds;
  ParamVector final_model;
  ParamVector weighted_model;
  double weighted_loss_gap = 0.0;
};

struct RunContext {
  const tasks::FederatedDataset* data = nullptr;
  const tasks::GlobalOptimum* optimum = nullptr;  // null skips loss metrics
  const tasks::UserDataset* test = nullptr;       // accuracy set, optional
  const Calibration* calibration = nullptr;
  AlgorithmSettings settings;
};

// Receives every user's round output; used by offline calibration.
class RoundObserver {
 public:
  virtual ~RoundObserver() = default;
  virtual void on_user(int round, int user, const ParamVector& theta_i,
                       const ParamVector& delta, const ParamVector& control) = 0;
};

TrialResult run_trial(AlgorithmKind kind, const RunContext& ctx,
                      std::uint64_t seed, RoundObserver* observer = nullptr);

TrialResult run_fedavg_noiseless(const RunContext& ctx, std::uint64_t seed);
TrialResult run_noisy_fedavg(const RunContext& ctx, std::uint64_t seed);
TrialResult run_cotaf(const RunContext& ctx, std::uint64_t seed);
TrialResult run_baaf(const RunContext& ctx, std::uint64_t seed);
TrialResult run_scaffold_noiseless(const RunContext& ctx, std::uint64_t seed);
TrialResult run_cobaaf(const RunContext& ctx, std::uint64_t seed);
TrialResult run_cobaaf_fading(const RunContext& ctx, std::uint64_t seed);

// Uniform S-subset of {0..N-1} by partial Fisher-Yates, sorted ascending.
std::vector<int> select_participants(Rng& rng, int num_users, int count);

struct CalibrationOptions {
  double frac = 0.2;
  int trials = 20;
  int rounds = 0;  // 0 means the run's round count
};

Calibration calibrate(const tasks::FederatedDataset& data,
                      const AlgorithmSettings& settings, AlgorithmKind mirror,
                      const CalibrationOptions& options, std::uint64_t seed);

}  // namespace otafl::orchestrator

#endif  // OTAFL_ORCHESTRATOR_HPP_
