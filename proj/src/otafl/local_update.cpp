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

#include "otafl/local_update.hpp"

#include <algorithm>
#include <cmath>

namespace otafl::local {

double OutputSchedule::log_weight(int r) const {
  const double q = mu_strong * eta_tilde / 2.0;
  require(mu_strong >= 0 && eta_tilde >= 0 && q < 1.0,
          "output schedule needs 0 <= mu * eta_tilde < 2");
  return static_cast<double>(1 - r) * std::log1p(-q);
}

double OutputSchedule::weight(int r) const { return std::exp(log_weight(r)); }

ParamVector local_sgd_round(const tasks::FederatedDataset& fed,
                            const tasks::UserDataset& user,
                            const ParamVector& theta0, int steps, double eta,
                            int batch_size, Rng& rng) {
  require(steps >= 1, "local steps must be positive");
  require(eta >= 0, "step size must be nonnegative");
  ParamVector theta = theta0;
  for (int k = 0; k < steps; ++k)
    theta -= eta * tasks::stochastic_grad(fed, user, theta, batch_size, rng);
  return theta;
}

ParamVector local_controlled_round(const tasks::FederatedDataset& fed,
                                   const tasks::UserDataset& user,
                                   const ParamVector& theta0, int steps,
                                   double eta, const ParamVector& c_i,
                                   const ParamVector& c_hat, int batch_size,
                                   Rng& rng) {
  require(steps >= 1, "local steps must be positive");
  require(c_i.size() == theta0.size() && c_hat.size() == theta0.size(),
          "control dimension mismatch");
  const ParamVector correction = c_hat - c_i;
  ParamVector theta = theta0;
  for (int k = 0; k < steps; ++k)
    theta -= eta * (tasks::stochastic_grad(fed, user, theta, batch_size, rng) +
                    correction);
  return theta;
}

ParamVector refresh_control(const tasks::FederatedDataset& fed,
                            const tasks::UserDataset& user,
                            const ParamVector& theta, int batch_size,
                            Rng& rng) {
  const int cap = static_cast<int>(std::min<Eigen::Index>(batch_size, user.size()));
  return tasks::stochastic_grad(fed, user, theta, cap, rng);
}

ParamVector weighted_output(const std::vector<ParamVector>& history,
                            const OutputSchedule& schedule) {
  require(!history.empty(), "empty model history");
  const int n = static_cast<int>(history.size());
  double top = schedule.log_weight(1);
  for (int r = 2; r <= n; ++r) top = std::max(top, schedule.log_weight(r));
  ParamVector acc = ParamVector::Zero(history.front().size());
  double total = 0.0;
  for (int r = 1; r <= n; ++r) {
    const double w = std::exp(schedule.log_weight(r) - top);
    acc += w * history[static_cast<std::size_t>(r - 1)];
    total += w;
  }
  return acc / total;
}

}  // namespace otafl::local
