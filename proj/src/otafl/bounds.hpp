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

#ifndef OTAFL_BOUNDS_HPP_
#define OTAFL_BOUNDS_HPP_

#include <cstdint>

#include "otafl/orchestrator.hpp"
#include "otafl/tasks.hpp"

namespace otafl::bounds {

struct BoundConstants {
  double mu = 1.0;          // strong convexity
  double beta = 1.0;        // smoothness
  double sigma2 = 0.0;      // stochastic gradient variance
  double m2 = 0.0;          // gradient second moment
  double g2 = 0.0;          // dissimilarity offset
  double b2 = 1.0;          // dissimilarity slope
  double sigma_theta = 0.0;
  double sigma_c = 0.0;
  double sigma_c_tilde = 0.0;
  double d = 1.0;
  double n = 1.0;
  double k = 1.0;
  double power = 1.0;
  double s = 1.0;
  double h_min = 1.0;
  double d0 = 0.0;
  double d_tilde2 = 0.0;

  void validate() const;
};

double theorem1_min_rounds(const BoundConstants& c);
double theorem2_min_rounds(const BoundConstants& c);
double theorem3_min_rounds(const BoundConstants& c);

// With check_precondition, R below the minimum round count is an error.
double theorem1_bound(const BoundConstants& c, double rounds,
                      bool check_precondition = true);
double theorem2_bound(const BoundConstants& c, double rounds,
                      bool check_precondition = true);
double theorem3_bound(const BoundConstants& c, double rounds,
                      bool check_precondition = true);

// d0 + (1 / (2 S beta^2)) sum_i ||c_i^0 - grad f_i(theta*)||^2.
double d_tilde2(double d0, double control_offset_sq_sum, double s, double beta);
// N D^2 / S + N sigma^2 / (K S beta^2).
double warm_start_bound(double n, double s, double beta, double dist2,
                        double sigma2, double k);

struct EstimateOptions {
  int probes = 100;
  int batch_size = 10;
  int local_steps = 10;
  double power = 1.0;
  double init_std = 1.0;
  int participants = 0;  // 0 means N
  double h_min = 1.0;
  std::uint64_t seed = 0;
};

// Curvature, gradient statistics and dissimilarity from the data; channel
// terms are filled by add_channel_terms.
BoundConstants estimate_constants(const tasks::FederatedDataset& fed,
                                  const tasks::GlobalOptimum& optimum,
                                  const EstimateOptions& options);

// sigma_theta, sigma_c and the fading sigma_c over the calibrated horizon.
void add_channel_terms(BoundConstants& c,
                       const orchestrator::Calibration& calibration,
                       double noise_var, int rounds, double rho_min = 1.0);

// Per-user batch gradient variance E||g - grad f_i||^2 at theta.
double gradient_variance(const tasks::FederatedDataset& fed,
                         const tasks::UserDataset& user,
                         const ParamVector& theta, int batch_size);

}  // namespace otafl::bounds

#endif  // OTAFL_BOUNDS_HPP_
