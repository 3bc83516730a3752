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

#include <algorithm>
#include <cmath>

#include "otafl/orchestrator.hpp"

namespace otafl::orchestrator {
namespace {

class CalibrationRecorder : public RoundObserver {
 public:
  CalibrationRecorder(int rounds, int users)
      : users_(users),
        delta_sq_(static_cast<std::size_t>(rounds * users), 0.0),
        control_sq_(delta_sq_.size(), 0.0),
        models_(delta_sq_.size()),
        controls_(delta_sq_.size()) {}

  void on_user(int round, int user, const ParamVector& theta_i,
               const ParamVector& delta, const ParamVector& control) override {
    const std::size_t k = slot(round, user);
    delta_sq_[k] += delta.squaredNorm();
    control_sq_[k] += control.squaredNorm();
    models_[k].add(theta_i);
    controls_[k].add(control);
  }

  Calibration finish(int rounds, int trials, AlgorithmKind mirror) const {
    Calibration out;
    out.mirror = mirror;
    for (int r = 1; r <= rounds; ++r) {
      double mt = 0.0, mc = 0.0;
      std::vector<priors::PriorMoments> row;
      for (int i = 0; i < users_; ++i) {
        const std::size_t k = slot(r, i);
        mt = std::max(mt, delta_sq_[k] / trials);
        mc = std::max(mc, control_sq_[k] / trials);
        row.push_back(priors::estimate_prior_moments(models_[k], controls_[k]));
      }
      out.table.m_theta.push_back(std::max(mt, precoding::kDenominatorFloor));
      out.table.m_c.push_back(std::max(mc, precoding::kDenominatorFloor));
      out.priors.rounds.push_back(std::move(row));
    }
    return out;
  }

 private:
  std::size_t slot(int round, int user) const {
    return static_cast<std::size_t>((round - 1) * users_ + user);
  }

  int users_;
  std::vector<double> delta_sq_;
  std::vector<double> control_sq_;
  std::vector<priors::MomentAccumulator> models_;
  std::vector<priors::MomentAccumulator> controls_;
};

}  // namespace

Calibration calibrate(const tasks::FederatedDataset& data,
                      const AlgorithmSettings& settings, AlgorithmKind mirror,
                      const CalibrationOptions& options, std::uint64_t seed) {
  require(options.frac > 0 && options.frac <= 1, "frac must lie in (0, 1]",
          ErrorCode::kConfig);
  require(options.trials >= 1, "calibration trials must be positive",
          ErrorCode::kConfig);
  require(!is_noisy(mirror), "calibration runs a noiseless algorithm");
  const int rounds = options.rounds > 0 ? options.rounds : settings.rounds;

  tasks::FederatedDataset sub;
  sub.kind = data.kind;
  sub.num_classes = data.num_classes;
  sub.l2 = data.l2;
  for (std::size_t i = 0; i < data.users.size(); ++i) {
    const auto& u = data.users[i];
    const auto count = static_cast<Eigen::Index>(
        std::llround(options.frac * static_cast<double>(u.size())));
    require(count >= settings.batch_size,
            "calibration subsample of user " + std::to_string(i) +
                " is smaller than the batch size",
            ErrorCode::kInsufficientData);
    Rng rng = make_rng(seed, Stream::kSubsample, {i});
    sub.users.push_back(tasks::subsample(u, count, rng));
  }

  RunContext ctx;
  ctx.data = &sub;
  ctx.settings = settings;
  ctx.settings.rounds = rounds;
  ctx.settings.participants = 0;
  CalibrationRecorder recorder(rounds, static_cast<int>(sub.users.size()));
  for (int t = 0; t < options.trials; ++t)
    run_trial(mirror, ctx,
              derive_seed(mix_seed(seed, static_cast<std::uint64_t>(
                                             Stream::kCalibration)),
                          {static_cast<std::uint64_t>(t)}),
              &recorder);
  return recorder.finish(rounds, options.trials, mirror);
}

}  // namespace otafl::orchestrator
