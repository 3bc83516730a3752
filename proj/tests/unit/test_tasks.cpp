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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "otafl/tasks.hpp"
#include "test_util.hpp"

namespace otafl::tasks {
namespace {

using otafl::testing::sample_mean;
using otafl::testing::sample_var;
using otafl::testing::small_logistic;
using otafl::testing::small_regression;

double naive_regression_loss(const UserDataset& u, const ParamVector& theta) {
  double total = 0.0;
  for (Eigen::Index n = 0; n < u.size(); ++n) {
    double pred = 0.0;
    for (Eigen::Index m = 0; m < u.features.cols(); ++m)
      pred += u.features(n, m) * theta[m];
    total += (pred - u.labels[n]) * (pred - u.labels[n]);
  }
  return total / static_cast<double>(u.size());
}

double naive_logistic_loss(const FederatedDataset& fed, const UserDataset& u,
                           const ParamVector& theta) {
  const Eigen::Index p = u.features.cols();
  const int classes = fed.num_classes;
  double total = 0.0;
  for (Eigen::Index n = 0; n < u.size(); ++n) {
    std::vector<double> z(static_cast<std::size_t>(classes));
    for (int c = 0; c < classes; ++c) {
      double s = theta[c * (p + 1) + p];
      for (Eigen::Index m = 0; m < p; ++m)
        s += theta[c * (p + 1) + m] * u.features(n, m);
      z[static_cast<std::size_t>(c)] = s;
    }
    const double zmax = *std::max_element(z.begin(), z.end());
    double denom = 0.0;
    for (double v : z) denom += std::exp(v - zmax);
    const int y = static_cast<int>(u.labels[n]);
    total += zmax + std::log(denom) - z[static_cast<std::size_t>(y)];
  }
  double reg = 0.0;
  for (Eigen::Index k = 0; k < theta.size(); ++k) reg += theta[k] * theta[k];
  return total / static_cast<double>(u.size()) + 0.5 * fed.l2 * reg;
}

ParamVector central_difference(const FederatedDataset& fed,
                               const UserDataset& u, const ParamVector& theta,
                               double h) {
  ParamVector g(theta.size());
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    ParamVector plus = theta, minus = theta;
    plus[k] += h;
    minus[k] -= h;
    g[k] = (local_loss(fed, u, plus) - local_loss(fed, u, minus)) / (2 * h);
  }
  return g;
}

TEST(Synthetic, ShapesAndDeterminism) {
  SyntheticConfig cfg;
  const auto a = gen_synthetic(cfg, 2024);
  const auto b = gen_synthetic(cfg, 2024);
  ASSERT_EQ(a.num_users(), 20u);
  for (std::size_t i = 0; i < a.num_users(); ++i) {
    EXPECT_EQ(a.users[i].features.rows(), 100);
    EXPECT_EQ(a.users[i].features.cols(), 10);
    EXPECT_EQ(a.users[i].labels.size(), 100);
    EXPECT_TRUE((a.users[i].features.array() == b.users[i].features.array()).all());
    EXPECT_TRUE((a.users[i].labels.array() == b.users[i].labels.array()).all());
  }
  const auto c = gen_synthetic(cfg, 2025);
  EXPECT_FALSE((a.users[0].labels.array() == c.users[0].labels.array()).all());
}

TEST(Synthetic, ZeroHeterogeneityPinsLatents) {
  SyntheticConfig cfg;
  cfg.feature_het = 0.0;
  cfg.model_het = 0.0;
  SyntheticTruth truth;
  gen_synthetic(cfg, 7, &truth);
  for (int i = 0; i < cfg.num_users; ++i) {
    EXPECT_EQ(truth.a[static_cast<std::size_t>(i)], 1.0);
    EXPECT_EQ(truth.b[static_cast<std::size_t>(i)], -4.0);
  }
}

TEST(Synthetic, NoiselessLabelsGiveZeroLossAtUserModel) {
  SyntheticConfig cfg;
  cfg.label_noise_std = 0.0;
  SyntheticTruth truth;
  const auto fed = gen_synthetic(cfg, 11, &truth);
  for (std::size_t i = 0; i < fed.num_users(); ++i)
    EXPECT_NEAR(local_loss(fed, fed.users[i], truth.theta[i]), 0.0, 1e-20);
}

TEST(Synthetic, RejectsDegenerateShapes) {
  SyntheticConfig cfg;
  cfg.dim = 0;
  EXPECT_THROW(gen_synthetic(cfg, 1), Error);
  cfg.dim = 10;
  cfg.num_users = 0;
  EXPECT_THROW(gen_synthetic(cfg, 1), Error);
}

TEST(Synthetic, FeatureHeterogeneityGrowsWithAlpha) {
  double var0 = 0.0, var1 = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    for (double het : {0.0, 1.0}) {
      SyntheticConfig cfg;
      cfg.feature_het = het;
      SyntheticTruth truth;
      const auto fed = gen_synthetic(cfg, 1000 + s, &truth);
      std::vector<double> means;
      for (const auto& u : fed.users) means.push_back(u.features.mean());
      (het == 0.0 ? var0 : var1) += sample_var(means) / 200.0;
      if (het == 0.0) EXPECT_EQ(sample_var(truth.a), 0.0);
    }
  }
  EXPECT_GT(var1, var0);
}

TEST(Loss, RegressionMatchesNaiveSum) {
  const auto fed = small_regression(3, 17, 6, 5);
  Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    const ParamVector theta = standard_normal_vector(6, rng);
    for (const auto& u : fed.users) {
      const double ref = naive_regression_loss(u, theta);
      EXPECT_NEAR(local_loss(fed, u, theta), ref, 1e-12 * std::max(1.0, ref));
    }
  }
}

TEST(Loss, LogisticMatchesNaiveSum) {
  const auto fed = small_logistic(2, 23, 5, 4, 3, 0.01);
  Rng rng(10);
  for (int t = 0; t < 10; ++t) {
    const ParamVector theta = standard_normal_vector(fed.param_dim(), rng);
    for (const auto& u : fed.users)
      EXPECT_NEAR(local_loss(fed, u, theta), naive_logistic_loss(fed, u, theta),
                  1e-12);
  }
}

TEST(Loss, DuplicatingDataLeavesLossUnchanged) {
  for (bool logistic : {false, true}) {
    const auto fed = logistic ? small_logistic(1, 15, 4, 3, 8)
                              : small_regression(1, 15, 4, 8);
    const UserDataset& u = fed.users[0];
    UserDataset twice;
    twice.features.resize(2 * u.size(), u.features.cols());
    twice.features << u.features, u.features;
    twice.labels.resize(2 * u.size());
    twice.labels << u.labels, u.labels;
    Rng rng(4);
    const ParamVector theta = standard_normal_vector(fed.param_dim(), rng);
    EXPECT_NEAR(local_loss(fed, u, theta), local_loss(fed, twice, theta),
                1e-12 * std::max(1.0, local_loss(fed, u, theta)));
  }
}

TEST(Gradient, MatchesCentralDifferences) {
  Rng rng(77);
  for (int draw = 0; draw < 100; ++draw) {
    const bool logistic = draw % 2 == 1;
    const auto fed = logistic ? small_logistic(1, 12, 4, 3, 500 + draw)
                              : small_regression(1, 12, 5, 500 + draw);
    const ParamVector theta = standard_normal_vector(fed.param_dim(), rng);
    const ParamVector g = full_grad(fed, fed.users[0], theta);
    const double scale = std::max(1.0, local_loss(fed, fed.users[0], theta));
    const ParamVector fd =
        central_difference(fed, fed.users[0], theta, 1e-5 * std::sqrt(scale));
    EXPECT_LE((g - fd).norm(), 1e-5 * std::max(1.0, g.norm())) << draw;
  }
}

TEST(Gradient, FullBatchIsExactGradient) {
  const auto fed = small_regression(1, 20, 4, 3);
  Rng rng(1);
  const ParamVector theta = standard_normal_vector(4, rng);
  const ParamVector g = stochastic_grad(fed, fed.users[0], theta, 20, rng);
  EXPECT_TRUE((g.array() == full_grad(fed, fed.users[0], theta).array()).all());
}

TEST(Gradient, StochasticGradientIsUnbiased) {
  for (bool logistic : {false, true}) {
    const auto fed = logistic ? small_logistic(1, 30, 3, 3, 12)
                              : small_regression(1, 30, 4, 12);
    const auto& u = fed.users[0];
    Rng rng(5);
    const ParamVector theta = standard_normal_vector(fed.param_dim(), rng);
    const ParamVector exact = full_grad(fed, u, theta);
    const int draws = 10000;
    ParamVector sum = ParamVector::Zero(theta.size());
    ParamVector sq = ParamVector::Zero(theta.size());
    for (int t = 0; t < draws; ++t) {
      const ParamVector g = stochastic_grad(fed, u, theta, 1, rng);
      sum += g;
      sq += g.cwiseProduct(g);
    }
    const ParamVector mean = sum / draws;
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      const double var = sq[k] / draws - mean[k] * mean[k];
      const double se = std::sqrt(std::max(var, 0.0) / draws);
      EXPECT_LE(std::abs(mean[k] - exact[k]), 4 * se + 1e-12) << k;
    }
  }
}

TEST(Gradient, RejectsBadBatch) {
  const auto fed = small_regression(1, 5, 2, 1);
  Rng rng(1);
  const ParamVector theta = ParamVector::Zero(2);
  EXPECT_THROW(stochastic_grad(fed, fed.users[0], theta, 0, rng), Error);
  EXPECT_THROW(stochastic_grad(fed, fed.users[0], theta, 6, rng), Error);
}

TEST(Optimum, IdentityDesignRecoversTarget) {
  FederatedDataset fed;
  UserDataset u;
  u.features = Matrix::Identity(4, 4);
  u.labels = Eigen::Vector4d(1.0, -2.0, 0.5, 3.0);
  fed.users.push_back(u);
  const auto opt = global_optimum(fed);
  EXPECT_LE((opt.theta_star - u.labels).norm(), 1e-12);
  EXPECT_NEAR(opt.f_star, 0.0, 1e-20);
}

TEST(Optimum, RegressionMatchesStackedLeastSquares) {
  const auto fed = small_regression(3, 9, 4, 21);
  Eigen::Index total = 0;
  for (const auto& u : fed.users) total += u.size();
  Eigen::MatrixXd a(total, 4);
  Eigen::VectorXd y(total);
  Eigen::Index row = 0;
  for (const auto& u : fed.users) {
    const double w = 1.0 / std::sqrt(3.0 * static_cast<double>(u.size()));
    a.middleRows(row, u.size()) = w * u.features;
    y.segment(row, u.size()) = w * u.labels;
    row += u.size();
  }
  const Eigen::VectorXd ref = a.householderQr().solve(y);
  const auto opt = global_optimum(fed);
  EXPECT_LE((opt.theta_star - ref).norm(), 1e-10 * std::max(1.0, ref.norm()));
  const ParamVector moved =
      opt.theta_star - 1e-2 * global_grad(fed, opt.theta_star);
  EXPECT_LE((moved - opt.theta_star).norm(), 1e-8);
}

TEST(Optimum, SingularRegressionIsReported) {
  FederatedDataset fed;
  UserDataset u;
  u.features = Matrix::Ones(5, 3);
  u.labels = Eigen::VectorXd::Ones(5);
  fed.users.push_back(u);
  try {
    global_optimum(fed);
    FAIL() << "expected singular error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingular);
  }
  OptimumOptions opts;
  opts.regularize = true;
  const auto opt = global_optimum(fed, opts);
  EXPECT_TRUE(opt.theta_star.allFinite());
}

TEST(Optimum, SeparableLogisticConverges) {
  FederatedDataset fed;
  fed.kind = TaskKind::kLogisticRegression;
  fed.num_classes = 2;
  fed.l2 = 1e-4;
  UserDataset u;
  u.features.resize(4, 1);
  u.features << -2.0, -1.0, 1.0, 2.0;
  u.labels = Eigen::Vector4d(0, 0, 1, 1);
  fed.users.push_back(u);
  const auto opt = global_optimum(fed);
  EXPECT_LE(opt.grad_norm, 1e-8);
  EXPECT_DOUBLE_EQ(accuracy(fed, u, opt.theta_star), 1.0);
  const ParamVector moved =
      opt.theta_star - 1e-2 * global_grad(fed, opt.theta_star);
  EXPECT_LE((moved - opt.theta_star).norm(), 1e-8);
}

TEST(Optimum, MulticlassLogisticFixedPoint) {
  const auto fed = small_logistic(3, 40, 5, 4, 31, 1e-2);
  const auto opt = global_optimum(fed);
  EXPECT_LE(opt.grad_norm, 1e-8);
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    const ParamVector other =
        opt.theta_star + 0.1 * standard_normal_vector(fed.param_dim(), rng);
    EXPECT_GE(global_loss(fed, other), opt.f_star);
  }
}

UserDataset labelled_rows(int count, int classes, std::uint64_t seed) {
  UserDataset d;
  d.features.resize(count, 1);
  d.labels.resize(count);
  Rng rng(seed);
  std::uniform_int_distribution<int> label(0, classes - 1);
  for (int n = 0; n < count; ++n) {
    d.features(n, 0) = n;
    d.labels[n] = label(rng);
  }
  return d;
}

void expect_conserved(const UserDataset& data, const FederatedDataset& fed) {
  std::vector<std::pair<double, double>> seen;
  for (const auto& u : fed.users)
    for (Eigen::Index n = 0; n < u.size(); ++n)
      seen.emplace_back(u.features(n, 0), u.labels[n]);
  std::sort(seen.begin(), seen.end());
  ASSERT_EQ(static_cast<Eigen::Index>(seen.size()), data.size());
  for (Eigen::Index n = 0; n < data.size(); ++n) {
    EXPECT_EQ(seen[static_cast<std::size_t>(n)].first, data.features(n, 0));
    EXPECT_EQ(seen[static_cast<std::size_t>(n)].second, data.labels[n]);
  }
}

TEST(Partition, BalancedSplitsEvenlyAndConserves) {
  const auto data = labelled_rows(6000, 10, 1);
  const auto fed = partition_balanced(data, 10, 42);
  ASSERT_EQ(fed.num_users(), 10u);
  for (const auto& u : fed.users) EXPECT_EQ(u.size(), 600);
  expect_conserved(data, fed);
  const auto again = partition_balanced(data, 10, 42);
  for (std::size_t i = 0; i < 10; ++i)
    EXPECT_TRUE((again.users[i].features.array() ==
                 fed.users[i].features.array()).all());
  const auto single = partition_balanced(data, 1, 42);
  EXPECT_EQ(single.users[0].size(), 6000);
}

TEST(Partition, ImbalancedReservesDominantClass) {
  const auto data = labelled_rows(6000, 10, 2);
  const auto fed = partition_imbalanced(data, 10, 0.2, 42);
  expect_conserved(data, fed);
  for (int i = 0; i < 10; ++i) {
    const auto& u = fed.users[static_cast<std::size_t>(i)];
    EXPECT_EQ(u.size(), 600);
    const auto own = (u.labels.array() == i).count();
    EXPECT_GE(own, 120);
    EXPECT_LE(own, 240);
  }
}

TEST(Partition, ZeroSkewEqualsBalanced) {
  const auto data = labelled_rows(500, 10, 3);
  const auto a = partition_imbalanced(data, 5, 0.0, 9);
  const auto b = partition_balanced(data, 5, 9);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_TRUE((a.users[i].features.array() == b.users[i].features.array()).all());
    EXPECT_TRUE((a.users[i].labels.array() == b.users[i].labels.array()).all());
  }
}

TEST(Partition, ClassExhaustionIsReported) {
  auto data = labelled_rows(100, 10, 4);
  for (Eigen::Index n = 0; n < data.size(); ++n)
    if (data.labels[n] == 3) data.labels[n] = 0;
  try {
    partition_imbalanced(data, 10, 0.5, 1);
    FAIL() << "expected exhaustion error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
}

}  // namespace
}  // namespace otafl::tasks
