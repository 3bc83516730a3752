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

#include "otafl/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace otafl::tasks {
namespace {

void check_theta(const FederatedDataset& fed, const ParamVector& theta) {
  require(theta.size() == fed.param_dim(), "parameter dimension mismatch");
  require(theta.allFinite(), "non-finite parameter vector");
}

Matrix gather(const Matrix& x, const std::vector<Eigen::Index>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t n = 0; n < rows.size(); ++n)
    out.row(static_cast<Eigen::Index>(n)) = x.row(rows[n]);
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& y,
                       const std::vector<Eigen::Index>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t n = 0; n < rows.size(); ++n)
    out[static_cast<Eigen::Index>(n)] = y[rows[n]];
  return out;
}

using WeightMap = Eigen::Map<const Matrix>;

// Row-wise softmax probabilities of the logits for features x.
Matrix softmax(const Matrix& x, const ParamVector& theta, int classes) {
  const Eigen::Index p = x.cols();
  WeightMap w(theta.data(), classes, p + 1);
  Matrix z = x * w.leftCols(p).transpose();
  z.rowwise() += w.col(p).transpose();
  for (Eigen::Index n = 0; n < z.rows(); ++n) {
    const double m = z.row(n).maxCoeff();
    z.row(n) = (z.row(n).array() - m).exp();
    z.row(n) /= z.row(n).sum();
  }
  return z;
}

double regression_loss(const Matrix& x, const Eigen::VectorXd& y,
                       const ParamVector& theta) {
  if (x.rows() == 0) return 0.0;
  return (x * theta - y).squaredNorm() / static_cast<double>(x.rows());
}

ParamVector regression_grad(const Matrix& x, const Eigen::VectorXd& y,
                            const ParamVector& theta) {
  if (x.rows() == 0) return ParamVector::Zero(theta.size());
  return (2.0 / static_cast<double>(x.rows())) *
         (x.transpose() * (x * theta - y));
}

double logistic_loss(const Matrix& x, const Eigen::VectorXd& y,
                     const ParamVector& theta, int classes) {
  if (x.rows() == 0) return 0.0;
  const Eigen::Index p = x.cols();
  WeightMap w(theta.data(), classes, p + 1);
  Matrix z = x * w.leftCols(p).transpose();
  z.rowwise() += w.col(p).transpose();
  double total = 0.0;
  for (Eigen::Index n = 0; n < z.rows(); ++n) {
    const double m = z.row(n).maxCoeff();
    const double lse = m + std::log((z.row(n).array() - m).exp().sum());
    total += lse - z(n, static_cast<Eigen::Index>(y[n]));
  }
  return total / static_cast<double>(x.rows());
}

ParamVector logistic_grad(const Matrix& x, const Eigen::VectorXd& y,
                          const ParamVector& theta, int classes) {
  ParamVector g = ParamVector::Zero(theta.size());
  if (x.rows() == 0) return g;
  const Eigen::Index p = x.cols();
  Matrix resid = softmax(x, theta, classes);
  for (Eigen::Index n = 0; n < resid.rows(); ++n)
    resid(n, static_cast<Eigen::Index>(y[n])) -= 1.0;
  const double scale = 1.0 / static_cast<double>(x.rows());
  Eigen::Map<Matrix> gw(g.data(), classes, p + 1);
  gw.leftCols(p) = scale * (resid.transpose() * x);
  gw.col(p) = scale * resid.colwise().sum().transpose();
  return g;
}

double loss_on(const FederatedDataset& fed, const Matrix& x,
               const Eigen::VectorXd& y, const ParamVector& theta) {
  double value = fed.kind == TaskKind::kLinearRegression
                     ? regression_loss(x, y, theta)
                     : logistic_loss(x, y, theta, fed.num_classes);
  if (fed.l2 > 0.0) value += 0.5 * fed.l2 * theta.squaredNorm();
  return value;
}

ParamVector grad_on(const FederatedDataset& fed, const Matrix& x,
                    const Eigen::VectorXd& y, const ParamVector& theta) {
  ParamVector g = fed.kind == TaskKind::kLinearRegression
                      ? regression_grad(x, y, theta)
                      : logistic_grad(x, y, theta, fed.num_classes);
  if (fed.l2 > 0.0) g += fed.l2 * theta;
  return g;
}

void check_classes(const UserDataset& data, int classes) {
  for (Eigen::Index n = 0; n < data.labels.size(); ++n) {
    const double c = data.labels[n];
    require(c >= 0 && c < classes && c == std::floor(c),
            "label outside the class range");
  }
}

std::vector<Eigen::Index> shuffled_indices(Eigen::Index count,
                                           std::uint64_t seed) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(count));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

std::vector<Eigen::Index> chunk_sizes(Eigen::Index total, int parts) {
  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(parts),
                                  total / parts);
  for (Eigen::Index k = 0; k < total % parts; ++k)
    ++sizes[static_cast<std::size_t>(k)];
  return sizes;
}

FederatedDataset make_classification(int classes, double l2) {
  FederatedDataset fed;
  fed.kind = TaskKind::kLogisticRegression;
  fed.num_classes = classes;
  fed.l2 = l2;
  return fed;
}

}  // namespace

Eigen::Index FederatedDataset::feature_dim() const {
  require(!users.empty(), "empty federated dataset");
  return users.front().features.cols();
}

Eigen::Index FederatedDataset::param_dim() const {
  const Eigen::Index p = feature_dim();
  return kind == TaskKind::kLinearRegression ? p : num_classes * (p + 1);
}

FederatedDataset gen_synthetic(const SyntheticConfig& cfg,
                               std::uint64_t seed, SyntheticTruth* truth) {
  require(cfg.num_users >= 1, "num_users must be positive");
  require(cfg.samples_per_user >= 1, "samples_per_user must be positive");
  require(cfg.dim >= 1, "dim must be positive");
  require(cfg.feature_het >= 0 && cfg.model_het >= 0 &&
              cfg.label_noise_std >= 0,
          "heterogeneity and noise parameters must be nonnegative");
  FederatedDataset fed;
  fed.kind = TaskKind::kLinearRegression;
  const double sa = std::sqrt(cfg.feature_het);
  const double sb = std::sqrt(cfg.model_het);
  for (int i = 0; i < cfg.num_users; ++i) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    std::normal_distribution<double> normal(0.0, 1.0);
    const double a_i = 1.0 + sa * normal(rng);
    const double b_i = -4.0 + sb * normal(rng);
    UserDataset user;
    user.features.resize(cfg.samples_per_user, cfg.dim);
    for (Eigen::Index n = 0; n < user.features.rows(); ++n)
      for (Eigen::Index m = 0; m < user.features.cols(); ++m)
        user.features(n, m) = a_i + normal(rng);
    ParamVector theta_i(cfg.dim);
    for (Eigen::Index m = 0; m < theta_i.size(); ++m)
      theta_i[m] = b_i + normal(rng);
    user.labels = user.features * theta_i;
    for (Eigen::Index n = 0; n < user.labels.size(); ++n)
      user.labels[n] += cfg.label_noise_std * normal(rng);
    if (truth != nullptr) {
      truth->a.push_back(a_i);
      truth->b.push_back(b_i);
      truth->theta.push_back(theta_i);
    }
    fed.users.push_back(std::move(user));
  }
  return fed;
}

UserDataset select_rows(const UserDataset& data,
                        const std::vector<Eigen::Index>& rows) {
  return UserDataset{gather(data.features, rows), gather(data.labels, rows)};
}

UserDataset subsample(const UserDataset& data, Eigen::Index count, Rng& rng) {
  require(count >= 0 && count <= data.size(), "subsample larger than data");
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(data.size()));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  for (Eigen::Index k = 0; k < count; ++k) {
    std::uniform_int_distribution<Eigen::Index> pick(k, data.size() - 1);
    std::swap(perm[static_cast<std::size_t>(k)],
              perm[static_cast<std::size_t>(pick(rng))]);
  }
  perm.resize(static_cast<std::size_t>(count));
  std::sort(perm.begin(), perm.end());
  return select_rows(data, perm);
}

FederatedDataset partition_balanced(const UserDataset& data, int num_users,
                                    std::uint64_t seed, int num_classes,
                                    double l2) {
  return partition_imbalanced(data, num_users, 0.0, seed, num_classes, l2);
}

FederatedDataset partition_imbalanced(const UserDataset& data, int num_users,
                                      double skew_frac, std::uint64_t seed,
                                      int num_classes, double l2) {
  require(num_users >= 1, "num_users must be positive");
  require(num_users <= data.size(), "more users than samples",
          ErrorCode::kInsufficientData);
  require(skew_frac >= 0.0 && skew_frac <= 1.0, "skew_frac outside [0,1]");
  check_classes(data, num_classes);
  if (skew_frac > 0.0)
    require(num_users <= num_classes,
            "imbalanced partition needs at most one user per class");

  const auto perm = shuffled_indices(data.size(), seed);
  const auto sizes = chunk_sizes(data.size(), num_users);
  std::vector<bool> used(static_cast<std::size_t>(data.size()), false);
  std::vector<std::vector<Eigen::Index>> rows(
      static_cast<std::size_t>(num_users));

  if (skew_frac > 0.0) {
    for (int i = 0; i < num_users; ++i) {
      const auto want = static_cast<Eigen::Index>(
          std::llround(skew_frac * static_cast<double>(sizes[i])));
      auto& mine = rows[static_cast<std::size_t>(i)];
      for (Eigen::Index idx : perm) {
        if (static_cast<Eigen::Index>(mine.size()) == want) break;
        if (!used[idx] && data.labels[idx] == i) {
          used[idx] = true;
          mine.push_back(idx);
        }
      }
      require(static_cast<Eigen::Index>(mine.size()) == want,
              "insufficient samples of class " + std::to_string(i),
              ErrorCode::kInsufficientData);
    }
  }
  std::size_t cursor = 0;
  for (int i = 0; i < num_users; ++i) {
    auto& mine = rows[static_cast<std::size_t>(i)];
    while (static_cast<Eigen::Index>(mine.size()) < sizes[i]) {
      const Eigen::Index idx = perm[cursor++];
      if (used[idx]) continue;
      used[idx] = true;
      mine.push_back(idx);
    }
  }
  FederatedDataset fed = make_classification(num_classes, l2);
  for (const auto& r : rows) fed.users.push_back(select_rows(data, r));
  return fed;
}

double local_loss(const FederatedDataset& fed, const UserDataset& user,
                  const ParamVector& theta) {
  check_theta(fed, theta);
  return loss_on(fed, user.features, user.labels, theta);
}

ParamVector full_grad(const FederatedDataset& fed, const UserDataset& user,
                      const ParamVector& theta) {
  check_theta(fed, theta);
  return grad_on(fed, user.features, user.labels, theta);
}

double batch_loss(const FederatedDataset& fed, const UserDataset& user,
                  const std::vector<Eigen::Index>& rows,
                  const ParamVector& theta) {
  check_theta(fed, theta);
  return loss_on(fed, gather(user.features, rows), gather(user.labels, rows),
                 theta);
}

ParamVector batch_grad(const FederatedDataset& fed, const UserDataset& user,
                       const std::vector<Eigen::Index>& rows,
                       const ParamVector& theta) {
  check_theta(fed, theta);
  return grad_on(fed, gather(user.features, rows), gather(user.labels, rows),
                 theta);
}

ParamVector stochastic_grad(const FederatedDataset& fed,
                            const UserDataset& user, const ParamVector& theta,
                            int batch_size, Rng& rng) {
  require(user.size() > 0, "empty dataset", ErrorCode::kInsufficientData);
  require(batch_size >= 1 && batch_size <= user.size(),
          "batch size outside [1, D_i]");
  if (batch_size == user.size()) return full_grad(fed, user, theta);
  std::uniform_int_distribution<Eigen::Index> pick(0, user.size() - 1);
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(batch_size));
  for (auto& r : rows) r = pick(rng);
  return batch_grad(fed, user, rows, theta);
}

double global_loss(const FederatedDataset& fed, const ParamVector& theta) {
  double total = 0.0;
  for (const auto& u : fed.users) total += local_loss(fed, u, theta);
  return total / static_cast<double>(fed.users.size());
}

ParamVector global_grad(const FederatedDataset& fed,
                        const ParamVector& theta) {
  ParamVector g = ParamVector::Zero(fed.param_dim());
  for (const auto& u : fed.users) g += full_grad(fed, u, theta);
  return g / static_cast<double>(fed.users.size());
}

ParamVector global_hessian_vector(const FederatedDataset& fed,
                                  const ParamVector& theta,
                                  const ParamVector& v) {
  require(fed.kind == TaskKind::kLogisticRegression,
          "Hessian-vector product is defined for the logistic task");
  check_theta(fed, theta);
  const int classes = fed.num_classes;
  const Eigen::Index p = fed.feature_dim();
  ParamVector hv = ParamVector::Zero(v.size());
  Eigen::Map<Matrix> out(hv.data(), classes, p + 1);
  WeightMap dir(v.data(), classes, p + 1);
  for (const auto& u : fed.users) {
    if (u.size() == 0) continue;
    const Matrix prob = softmax(u.features, theta, classes);
    Matrix uz = u.features * dir.leftCols(p).transpose();
    uz.rowwise() += dir.col(p).transpose();
    Matrix pu = prob.cwiseProduct(uz);
    const Eigen::VectorXd row = pu.rowwise().sum();
    Matrix s = pu - (prob.array().colwise() * row.array()).matrix();
    const double scale =
        1.0 / (static_cast<double>(u.size()) * static_cast<double>(fed.users.size()));
    out.leftCols(p) += scale * (s.transpose() * u.features);
    out.col(p) += scale * s.colwise().sum().transpose();
  }
  if (fed.l2 > 0.0) hv += fed.l2 * v;
  return hv;
}

Eigen::MatrixXd regression_hessian(const FederatedDataset& fed) {
  require(fed.kind == TaskKind::kLinearRegression,
          "pooled Hessian is defined for the regression task");
  const Eigen::Index d = fed.param_dim();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  for (const auto& u : fed.users) {
    if (u.size() == 0) continue;
    h += (2.0 / static_cast<double>(u.size())) *
         (u.features.transpose() * u.features);
  }
  h /= static_cast<double>(fed.users.size());
  if (fed.l2 > 0.0) h.diagonal().array() += fed.l2;
  return h;
}

namespace {

GlobalOptimum regression_optimum(const FederatedDataset& fed,
                                 const OptimumOptions& options) {
  Eigen::MatrixXd h = regression_hessian(fed);
  const Eigen::Index d = h.rows();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  for (const auto& u : fed.users) {
    if (u.size() == 0) continue;
    rhs += (2.0 / static_cast<double>(u.size())) *
           (u.features.transpose() * u.labels);
  }
  rhs /= static_cast<double>(fed.users.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 1e-12 * std::max(hi, 1e-300))) {
    require(options.regularize, "normal equations are singular",
            ErrorCode::kSingular);
    h.diagonal().array() += options.ridge;
  }
  GlobalOptimum opt;
  opt.theta_star = h.ldlt().solve(rhs);
  opt.f_star = global_loss(fed, opt.theta_star);
  opt.grad_norm = global_grad(fed, opt.theta_star).norm();
  return opt;
}

// Conjugate gradients on H p = rhs with a matrix-free operator.
template <class Op>
ParamVector conjugate_gradient(const Op& apply, const ParamVector& rhs,
                               double tol, int max_iter) {
  ParamVector x = ParamVector::Zero(rhs.size());
  ParamVector r = rhs;
  ParamVector p = r;
  double rr = r.squaredNorm();
  for (int it = 0; it < max_iter && std::sqrt(rr) > tol; ++it) {
    const ParamVector hp = apply(p);
    const double curv = p.dot(hp);
    if (curv <= 0.0) break;
    const double step = rr / curv;
    x += step * p;
    r -= step * hp;
    const double next = r.squaredNorm();
    p = r + (next / rr) * p;
    rr = next;
  }
  return x;
}

GlobalOptimum logistic_optimum(const FederatedDataset& fed,
                               const OptimumOptions& options) {
  ParamVector theta = ParamVector::Zero(fed.param_dim());
  double f = global_loss(fed, theta);
  ParamVector g = global_grad(fed, theta);
  for (int it = 0; it < options.max_newton_iterations; ++it) {
    const double gn = g.norm();
    if (gn <= options.tolerance) break;
    const double cg_tol = std::min(0.1, std::sqrt(gn)) * gn;
    ParamVector step = conjugate_gradient(
        [&](const ParamVector& v) {
          return global_hessian_vector(fed, theta, v);
        },
        -g, cg_tol, 1000);
    if (step.squaredNorm() == 0.0) step = -g;
    double t = 1.0;
    const double slope = g.dot(step);
    ParamVector trial = theta + step;
    double ft = global_loss(fed, trial);
    while (gn > 1e-5 && ft > f + 1e-4 * t * slope && t > 1e-10) {
      t *= 0.5;
      trial = theta + t * step;
      ft = global_loss(fed, trial);
    }
    theta = std::move(trial);
    f = ft;
    g = global_grad(fed, theta);
  }
  GlobalOptimum opt;
  opt.theta_star = theta;
  opt.f_star = f;
  opt.grad_norm = g.norm();
  require(std::isfinite(opt.f_star), "optimizer diverged",
          ErrorCode::kRuntime);
  return opt;
}

}  // namespace

GlobalOptimum global_optimum(const FederatedDataset& fed,
                             const OptimumOptions& options) {
  require(!fed.users.empty(), "empty federated dataset");
  return fed.kind == TaskKind::kLinearRegression
             ? regression_optimum(fed, options)
             : logistic_optimum(fed, options);
}

double accuracy(const FederatedDataset& fed, const UserDataset& data,
                const ParamVector& theta) {
  require(fed.kind == TaskKind::kLogisticRegression,
          "accuracy is defined for the classification task");
  require(theta.size() == fed.param_dim(), "parameter dimension mismatch");
  if (data.size() == 0) return 0.0;
  const Eigen::Index p = data.features.cols();
  WeightMap w(theta.data(), fed.num_classes, p + 1);
  Matrix z = data.features * w.leftCols(p).transpose();
  z.rowwise() += w.col(p).transpose();
  Eigen::Index hits = 0;
  for (Eigen::Index n = 0; n < z.rows(); ++n) {
    Eigen::Index best = 0;
    z.row(n).maxCoeff(&best);
    if (best == static_cast<Eigen::Index>(data.labels[n])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

UserDataset pooled(const FederatedDataset& fed) {
  Eigen::Index total = 0;
  for (const auto& u : fed.users) total += u.size();
  UserDataset out;
  out.features.resize(total, fed.feature_dim());
  out.labels.resize(total);
  Eigen::Index at = 0;
  for (const auto& u : fed.users) {
    out.features.middleRows(at, u.size()) = u.features;
    out.labels.segment(at, u.size()) = u.labels;
    at += u.size();
  }
  return out;
}

}  // namespace otafl::tasks
