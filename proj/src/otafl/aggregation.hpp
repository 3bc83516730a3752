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

#ifndef OTAFL_AGGREGATION_HPP_
#define OTAFL_AGGREGATION_HPP_

#include <utility>

#include "otafl/common.hpp"
#include "otafl/priors.hpp"

namespace otafl::aggregation {

enum class EstimateKind { kModel, kControl };

struct RecoveredAverage {
  ParamVector value;
  EstimateKind kind = EstimateKind::kModel;
  double effective_noise_var = 0.0;
};

RecoveredAverage recover_model(const ParamVector& y, int num_users,
                               double alpha, const ParamVector& theta_prev,
                               double noise_var);
RecoveredAverage recover_control(const ParamVector& z, int num_users,
                                 double beta, double noise_var);

// Fading recovery over a participant set of size `participants`.
std::pair<RecoveredAverage, RecoveredAverage> recover_fading(
    const ParamVector& y, const ParamVector& z, int participants, double h_min,
    double rho_min, double alpha, double beta, const ParamVector& theta_prev,
    double noise_var);

// kappa = prior_var / (prior_var + noise), with 0/0 taken as 1.
double shrink_factor(double prior_var, double noise_var);

ParamVector mmse_shrink(const RecoveredAverage& noisy,
                        const priors::AggregatedPrior& prior);
ParamVector mmse_shrink(const ParamVector& x, double effective_noise_var,
                        double prior_mean, double prior_var);

// Per-coordinate MMSE of the model estimate.
double analytic_mse(const priors::AggregatedPrior& prior, int num_users,
                    double alpha, double noise_var);
// sigma_w^2 / (1 + sigma_w^2 / (alpha N^2 sigma^2)).
double sigma_theta(double prior_var, int num_users, double alpha,
                   double noise_var);
// sigma_w^2 / (1 + sigma_w^2 / (beta sum_i v_i^2)).
double sigma_c(double sum_v2, double beta, double noise_var);

}  // namespace otafl::aggregation

#endif  // OTAFL_AGGREGATION_HPP_
