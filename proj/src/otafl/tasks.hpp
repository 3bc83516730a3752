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

#ifndef OTAFL_TASKS_HPP_
#define OTAFL_TASKS_HPP_

#include <cstdint>
#include <vector>

#include "otafl/common.hpp"
#include "otafl/rng.hpp"

namespace otafl::tasks {

enum class TaskKind { kLinearRegression, kLogisticRegression };

struct SyntheticConfig {
  int num_users = 20;
  int samples_per_user = 100;
  int dim = 10;
  double feature_het = 0.1;
  double model_het = 1.0;
  double label_noise_std = 0.1;
};

// Labels hold real targets for regression and class indices for
// classification.
struct UserDataset {
  Matrix features;
  Eigen::VectorXd labels;

  Eigen::Index size() const { return features.rows(); }
};

struct FederatedDataset {
  std::vector<UserDataset> users;
  TaskKind kind = TaskKind::kLinearRegression;
  int num_classes = 10;
  double l2 = 0.0;

  Eigen::Index feature_dim() const;
  Eigen::Index param_dim() const;
  std::size_t num_users() const { return users.size(); }
};

struct GlobalOptimum {
  ParamVector theta_star;
  double f_star = 0.0;
  double grad_norm = 0.0;
};

// Latent per-user draws behind a synthetic dataset.
struct SyntheticTruth {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<ParamVector> theta;
};

FederatedDataset gen_synthetic(const SyntheticConfig& cfg, std::uint64_t seed,
                               SyntheticTruth* truth = nullptr);

// Random subset of `count` samples drawn without replacement.
UserDataset subsample(const UserDataset& data, Eigen::Index count, Rng& rng);
UserDataset select_rows(const UserDataset& data,
                        const std::vector<Eigen::Index>& rows);

FederatedDataset partition_balanced(const UserDataset& data, int num_users,
                                    std::uint64_t seed, int num_classes = 10,
                                    double l2 = 0.0);
FederatedDataset partition_imbalanced(const UserDataset& data, int num_users,
                                      double skew_frac, std::uint64_t seed,
                                      int num_classes = 10, double l2 = 0.0);

double local_loss(const FederatedDataset& fed, const UserDataset& user,
                  const ParamVector& theta);
ParamVector full_grad(const FederatedDataset& fed, const UserDataset& user,
                      const ParamVector& theta);
// Batch rows drawn uniformly with replacement; a batch of D_i is the full
// gradient.
ParamVector stochastic_grad(const FederatedDataset& fed,
                            const UserDataset& user, const ParamVector& theta,
                            int batch_size, Rng& rng);

// Loss and gradient over an explicit row list (duplicates allowed).
double batch_loss(const FederatedDataset& fed, const UserDataset& user,
                  const std::vector<Eigen::Index>& rows,
                  const ParamVector& theta);
ParamVector batch_grad(const FederatedDataset& fed, const UserDataset& user,
                       const std::vector<Eigen::Index>& rows,
                       const ParamVector& theta);

// Global objective F = (1/N) sum_i f_i.
double global_loss(const FederatedDataset& fed, const ParamVector& theta);
ParamVector global_grad(const FederatedDataset& fed, const ParamVector& theta);

// Hessian of the global objective times v (logistic only).
ParamVector global_hessian_vector(const FederatedDataset& fed,
                                  const ParamVector& theta,
                                  const ParamVector& v);

// Pooled Hessian of a regression task.
Eigen::MatrixXd regression_hessian(const FederatedDataset& fed);

struct OptimumOptions {
  bool regularize = false;
  double ridge = 1e-10;
  double tolerance = 1e-9;
  int max_newton_iterations = 60;
};

GlobalOptimum global_optimum(const FederatedDataset& fed,
                             const OptimumOptions& options = {});

// Fraction of correctly classified samples.
double accuracy(const FederatedDataset& fed, const UserDataset& data,
                const ParamVector& theta);

// Centralized pool of all user samples.
UserDataset pooled(const FederatedDataset& fed);

}  // namespace otafl::tasks

#endif  // OTAFL_TASKS_HPP_
