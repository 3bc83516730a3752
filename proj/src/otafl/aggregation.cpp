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

#include "otafl/aggregation.hpp"

#include <cmath>

namespace otafl::aggregation {

RecoveredAverage recover_model(const ParamVector& y, int num_users,
                               double alpha, const ParamVector& theta_prev,
                               double noise_var) {
  require(num_users >= 1, "num_users must be positive");
  require(alpha > 0, "precoding factor must be positive");
  require(y.size() == theta_prev.size(), "dimension mismatch");
  const double n = static_cast<double>(num_users);
  return RecoveredAverage{y / (n * std::sqrt(alpha)) + theta_prev,
                          EstimateKind::kModel,
                          noise_var / (n * n * alpha)};
}

RecoveredAverage recover_control(const ParamVector& z, int num_users,
                                 double beta, double noise_var) {
  require(num_users >= 1, "num_users must be positive");
  require(beta > 0, "precoding factor must be positive");
  const double n = static_cast<double>(num_users);
  return RecoveredAverage{z / (n * std::sqrt(beta)), EstimateKind::kControl,
                          noise_var / (n * n * beta)};
}

std::pair<RecoveredAverage, RecoveredAverage> recover_fading(
    const ParamVector& y, const ParamVector& z, int participants, double h_min,
    double rho_min, double alpha, double beta, const ParamVector& theta_prev,
    double noise_var) {
  require(participants >= 1, "empty participant set");
  require(h_min > 0 && rho_min > 0, "thresholds must be positive");
  require(alpha > 0 && beta > 0, "precoding factors must be positive");
  require(y.size() == theta_prev.size(), "dimension mismatch");
  const double s = static_cast<double>(participants);
  const double gm = s * std::sqrt(alpha) * h_min;
  const double gc = s * std::sqrt(beta) * rho_min;
  return {RecoveredAverage{y / gm + theta_prev, EstimateKind::kModel,
                           noise_var / (gm * gm)},
          RecoveredAverage{z / gc, EstimateKind::kControl,
                           noise_var / (gc * gc)}};
}

double shrink_factor(double prior_var, double noise_var) {
  require(prior_var >= 0 && noise_var >= 0, "variances must be nonnegative");
  const double denom = prior_var + noise_var;
  return denom == 0.0 ? 1.0 : prior_var / denom;
}

ParamVector mmse_shrink(const ParamVector& x, double effective_noise_var,
                        double prior_mean, double prior_var) {
  if (effective_noise_var == 0.0) return x;
  const double kappa = shrink_factor(prior_var, effective_noise_var);
  return (prior_mean + kappa * (x.array() - prior_mean)).matrix();
}

ParamVector mmse_shrink(const RecoveredAverage& noisy,
                        const priors::AggregatedPrior& prior) {
  if (noisy.kind == EstimateKind::kModel)
    return mmse_shrink(noisy.value, noisy.effective_noise_var, prior.mu,
                       prior.sigma2);
  return mmse_shrink(noisy.value, noisy.effective_noise_var, prior.b, prior.v2);
}

double sigma_theta(double prior_var, int num_users, double alpha,
                   double noise_var) {
  require(alpha > 0, "precoding factor must be positive");
  if (prior_var <= 0.0 || noise_var == 0.0) return 0.0;
  const double n = static_cast<double>(num_users);
  return noise_var / (1.0 + noise_var / (alpha * n * n * prior_var));
}

double sigma_c(double sum_v2, double beta, double noise_var) {
  require(beta > 0, "precoding factor must be positive");
  if (sum_v2 <= 0.0 || noise_var == 0.0) return 0.0;
  return noise_var / (1.0 + noise_var / (beta * sum_v2));
}

double analytic_mse(const priors::AggregatedPrior& prior, int num_users,
                    double alpha, double noise_var) {
  const double n = static_cast<double>(num_users);
  return sigma_theta(prior.sigma2, num_users, alpha, noise_var) /
         (n * n * alpha);
}

}  // namespace otafl::aggregation
