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

#include "otafl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "otafl/aggregation.hpp"

namespace otafl::bounds {
namespace {

double log_term(double mu, double rounds, double dist, double c) {
  if (c <= 0.0) return 0.0;
  return std::log(std::max(1.0, mu * mu * rounds * dist / c));
}

void check_rounds(double rounds, double min_rounds, bool check) {
  require(rounds > 0 && std::isfinite(rounds), "round count must be positive");
  if (check)
    require(rounds >= min_rounds,
            "round count " + std::to_string(rounds) +
                " is below the bound's minimum " + std::to_string(min_rounds));
}

// Adds prefactor * log(...) only when the prefactor is nonzero, so that a
// vanishing constant never produces 0 * inf.
double scaled_log(double prefactor, double log_value) {
  return prefactor == 0.0 ? 0.0 : prefactor * log_value;
}

}  // namespace

void BoundConstants::validate() const {
  require(mu > 0 && beta > 0, "mu and beta must be positive");
  require(sigma2 >= 0 && m2 >= 0 && g2 >= 0 && b2 >= 0 && sigma_theta >= 0 &&
              sigma_c >= 0 && sigma_c_tilde >= 0 && d0 >= 0 && d_tilde2 >= 0,
          "bound constants must be nonnegative");
  require(d >= 1 && n >= 1 && k >= 1 && s >= 1 && power > 0 && h_min > 0,
          "dimension, user, step and power constants must be positive");
}

double theorem1_min_rounds(const BoundConstants& c) {
  return 8.0 * c.beta * (1.0 + c.b2) / c.mu;
}

double theorem2_min_rounds(const BoundConstants& c) {
  return 8.0 * c.beta / c.mu;
}

double theorem3_min_rounds(const BoundConstants& c) {
  return std::max(162.0 * c.beta / c.mu, 30.0 * c.n / c.s);
}

double theorem1_bound(const BoundConstants& c, double rounds,
                      bool check_precondition) {
  c.validate();
  check_rounds(rounds, theorem1_min_rounds(c), check_precondition);
  const double mu = c.mu, r = rounds, n = c.n;
  const double c1 = c.sigma2 * (1 + n) / (c.k * n) +
                    c.d * c.m2 * c.sigma_theta / (n * n * c.power);
  const double c2 = c.beta * c.g2;
  const double lead = 3 * c.sigma2 * (1 + n) / (mu * r * c.k * n) +
                      3 * c.d * c.m2 * c.sigma_theta / (mu * r * n * n * c.power);
  const double l2 = log_term(mu, r, c.d0, c2);
  return scaled_log(lead, log_term(mu, r, c.d0, c1)) +
         scaled_log(3 * c.beta * c.g2 / (mu * mu * r * r), l2 * l2) +
         3 * mu * c.d0 * std::exp(-mu * r / (16 * c.beta * (1 + c.b2)));
}

double theorem2_bound(const BoundConstants& c, double rounds,
                      bool check_precondition) {
  c.validate();
  check_rounds(rounds, theorem2_min_rounds(c), check_precondition);
  const double mu = c.mu, r = rounds, n = c.n, k = c.k;
  const double c3 = c.sigma2 * (1 + n) / (k * n) +
                    c.d * c.m2 * c.sigma_theta / (k * n * n * c.power) +
                    c.d * c.m2 * c.sigma_c * (1 + n * k) / (k * n * n * c.power);
  const double lead = 2 * c.sigma2 * (1 + n) / (mu * r * k * n) +
                      2 * c.d * c.m2 * c.sigma_theta / (mu * r * k * n * n * c.power) +
                      2 * c.d * c.m2 * c.sigma_c * (1 + n * k) /
                          (mu * r * k * n * n * c.power);
  return scaled_log(lead, log_term(mu, r, c.d0, c3)) +
         2 * mu * c.d0 * std::exp(-mu * r / (16 * c.beta));
}

double theorem3_bound(const BoundConstants& c, double rounds,
                      bool check_precondition) {
  c.validate();
  check_rounds(rounds, theorem3_min_rounds(c), check_precondition);
  const double mu = c.mu, r = rounds, s = c.s, k = c.k;
  const double hp = s * s * c.h_min * c.h_min * c.power;
  const double c4 = c.sigma2 * (1 + s) / (k * s) +
                    c.d * c.m2 * c.sigma_theta / (k * hp) +
                    c.d * c.m2 * c.sigma_c_tilde * (1 + s * k) / (k * hp);
  const double lead = c.sigma2 * (1 + s) / (mu * r * k * s) +
                      c.d * c.m2 * c.sigma_theta / (mu * r * k * hp) +
                      c.d * c.m2 * c.sigma_c_tilde * (1 + s * k) / (mu * r * k * hp);
  const double rate = std::min(s / (30 * c.n), mu / (162 * c.beta));
  return scaled_log(lead, log_term(mu, r, c.d_tilde2, c4)) +
         mu * c.d_tilde2 * std::exp(-rate * r);
}

double d_tilde2(double d0, double control_offset_sq_sum, double s,
                double beta) {
  return d0 + control_offset_sq_sum / (2 * s * beta * beta);
}

double warm_start_bound(double n, double s, double beta, double dist2,
                        double sigma2, double k) {
  return n * dist2 / s + n * sigma2 / (k * s * beta * beta);
}

double gradient_variance(const tasks::FederatedDataset& fed,
                         const tasks::UserDataset& user,
                         const ParamVector& theta, int batch_size) {
  require(user.size() > 0 && batch_size >= 1, "empty user or batch");
  // Mean squared per-sample gradient minus the squared mean gradient; the
  // regularizer is deterministic and cancels.
  const Eigen::Index p = user.features.cols();
  double mean_sq = 0.0;
  if (fed.kind == tasks::TaskKind::kLinearRegression) {
    const Eigen::VectorXd resid = user.features * theta - user.labels;
    for (Eigen::Index n = 0; n < user.size(); ++n)
      mean_sq += 4 * resid[n] * resid[n] * user.features.row(n).squaredNorm();
  } else {
    Eigen::Map<const Matrix> w(theta.data(), fed.num_classes, p + 1);
    for (Eigen::Index n = 0; n < user.size(); ++n) {
      Eigen::VectorXd z = w.leftCols(p) * user.features.row(n).transpose() + w.col(p);
      z = (z.array() - z.maxCoeff()).exp();
      z /= z.sum();
      z[static_cast<Eigen::Index>(user.labels[n])] -= 1.0;
      mean_sq += z.squaredNorm() * (user.features.row(n).squaredNorm() + 1.0);
    }
  }
  mean_sq /= static_cast<double>(user.size());
  ParamVector g = tasks::full_grad(fed, user, theta);
  if (fed.l2 > 0) g -= fed.l2 * theta;
  const double per_sample = std::max(mean_sq - g.squaredNorm(), 0.0);
  if (batch_size >= user.size()) return 0.0;
  return per_sample / batch_size;
}

BoundConstants estimate_constants(const tasks::FederatedDataset& fed,
                                  const tasks::GlobalOptimum& optimum,
                                  const EstimateOptions& options) {
  require(options.probes >= 2, "at least two probes are needed");
  BoundConstants c;
  const Eigen::Index d = fed.param_dim();
  if (fed.kind == tasks::TaskKind::kLinearRegression) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        tasks::regression_hessian(fed), Eigen::EigenvaluesOnly);
    c.mu = eig.eigenvalues().minCoeff();
    c.beta = eig.eigenvalues().maxCoeff();
    require(c.mu > 0, "task is not strongly convex");
  } else {
    const tasks::UserDataset all = tasks::pooled(fed);
    Matrix aug(all.size(), all.features.cols() + 1);
    aug.leftCols(all.features.cols()) = all.features;
    aug.col(all.features.cols()).setOnes();
    const Eigen::MatrixXd second =
        aug.transpose() * aug / static_cast<double>(std::max<Eigen::Index>(all.size(), 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(second,
                                                       Eigen::EigenvaluesOnly);
    c.mu = fed.l2;
    c.beta = 0.5 * eig.eigenvalues().maxCoeff() + fed.l2;
    require(c.mu > 0, "task is not strongly convex");
  }

  // Probes along segments from random initial points to the optimum.
  Rng rng = make_rng(options.seed, Stream::kProbe);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> xs, ys;
  for (int j = 0; j < options.probes; ++j) {
    const ParamVector start =
        options.init_std * standard_normal_vector(d, rng);
    const double t = unit(rng);
    const ParamVector theta = optimum.theta_star + t * (start - optimum.theta_star);
    double mean_local = 0.0;
    for (const auto& u : fed.users) {
      const ParamVector g = tasks::full_grad(fed, u, theta);
      const double var = gradient_variance(fed, u, theta, options.batch_size);
      c.sigma2 = std::max(c.sigma2, var);
      c.m2 = std::max(c.m2, g.squaredNorm() + var);
      mean_local += g.squaredNorm();
    }
    ys.push_back(mean_local / static_cast<double>(fed.num_users()));
    xs.push_back(tasks::global_grad(fed, theta).squaredNorm());
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    sxy += xs[j] * ys[j];
    sxx += xs[j] * xs[j];
  }
  c.b2 = std::max(1.0, sxx > 0 ? sxy / sxx : 1.0);
  for (std::size_t j = 0; j < xs.size(); ++j)
    c.g2 = std::max(c.g2, ys[j] - c.b2 * xs[j]);

  c.d = static_cast<double>(d);
  c.n = static_cast<double>(fed.num_users());
  c.k = options.local_steps;
  c.power = options.power;
  c.s = options.participants > 0 ? options.participants : c.n;
  c.h_min = options.h_min;
  c.d0 = optimum.theta_star.squaredNorm() +
         static_cast<double>(d) * options.init_std * options.init_std;
  c.d_tilde2 = c.d0;
  return c;
}

void add_channel_terms(BoundConstants& c,
                       const orchestrator::Calibration& calibration,
                       double noise_var, int rounds, double rho_min) {
  const auto n = static_cast<int>(c.n);
  c.sigma_theta = c.sigma_c = c.sigma_c_tilde = 0.0;
  for (int r = 1; r <= rounds; ++r) {
    const auto& users = calibration.priors.at(r);
    const auto prior = priors::aggregate_prior(users);
    const double alpha = precoding::alpha_r(c.power, calibration.table, r);
    const double beta = precoding::beta_r(c.power, calibration.table, r);
    double sum_v2 = 0.0;
    for (const auto& p : users) sum_v2 += p.v2;
    c.sigma_theta = std::max(
        c.sigma_theta, aggregation::sigma_theta(prior.sigma2, n, alpha, noise_var));
    c.sigma_c = std::max(c.sigma_c, aggregation::sigma_c(sum_v2, beta, noise_var));
    c.sigma_c_tilde = std::max(
        c.sigma_c_tilde, aggregation::sigma_c(sum_v2 * c.s / c.n,
                                              beta * rho_min * rho_min, noise_var));
  }
}

}  // namespace otafl::bounds
