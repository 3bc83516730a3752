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

#ifndef OTAFL_LOCAL_UPDATE_HPP_
#define OTAFL_LOCAL_UPDATE_HPP_

#include <vector>

#include "otafl/rng.hpp"
#include "otafl/tasks.hpp"

namespace otafl::local {

struct ClientState {
  ParamVector theta;
  ParamVector control;
  int user_index = 0;
};

// Weights w_r = (1 - mu * eta_tilde / 2)^(1 - r), r = 1, 2, ...
struct OutputSchedule {
  double mu_strong = 0.0;
  double eta_tilde = 0.0;

  double log_weight(int r) const;
  double weight(int r) const;
};

ParamVector local_sgd_round(const tasks::FederatedDataset& fed,
                            const tasks::UserDataset& user,
                            const ParamVector& theta0, int steps, double eta,
                            int batch_size, Rng& rng);

// theta_k = theta_{k-1} - eta (g(theta_{k-1}) - c_i + c_hat).
ParamVector local_controlled_round(const tasks::FederatedDataset& fed,
                                   const tasks::UserDataset& user,
                                   const ParamVector& theta0, int steps,
                                   double eta, const ParamVector& c_i,
                                   const ParamVector& c_hat, int batch_size,
                                   Rng& rng);

// Fresh stochastic gradient at theta; the batch is capped at D_i.
ParamVector refresh_control(const tasks::FederatedDataset& fed,
                            const tasks::UserDataset& user,
                            const ParamVector& theta, int batch_size,
                            Rng& rng);

// sum_r w_r theta^{r-1} / sum_r w_r over history theta^0 .. theta^R.
ParamVector weighted_output(const std::vector<ParamVector>& history,
                            const OutputSchedule& schedule);

}  // namespace otafl::local

#endif  // OTAFL_LOCAL_UPDATE_HPP_
