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

#ifndef OTAFL_TESTS_TEST_UTIL_HPP_
#define OTAFL_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "otafl/rng.hpp"
#include "otafl/tasks.hpp"

namespace otafl::testing {

// Small multinomial task with random features in [0, 1).
inline tasks::FederatedDataset small_logistic(int users, int rows, int features,
                                              int classes, std::uint64_t seed,
                                              double l2 = 1e-3) {
  tasks::FederatedDataset fed;
  fed.kind = tasks::TaskKind::kLogisticRegression;
  fed.num_classes = classes;
  fed.l2 = l2;
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> label(0, classes - 1);
  for (int i = 0; i < users; ++i) {
    tasks::UserDataset u;
    u.features.resize(rows, features);
    u.labels.resize(rows);
    for (int n = 0; n < rows; ++n) {
      for (int m = 0; m < features; ++m) u.features(n, m) = unif(rng);
      u.labels[n] = label(rng);
    }
    fed.users.push_back(std::move(u));
  }
  return fed;
}

inline tasks::FederatedDataset small_regression(int users, int rows, int dim,
                                                std::uint64_t seed) {
  tasks::SyntheticConfig cfg;
  cfg.num_users = users;
  cfg.samples_per_user = rows;
  cfg.dim = dim;
  return tasks::gen_synthetic(cfg, seed);
}

inline double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_var(const std::vector<double>& v) {
  const double m = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline std::string temp_path(const std::string& name) {
  return ::testing::TempDir() + name;
}

}  // namespace otafl::testing

#endif  // OTAFL_TESTS_TEST_UTIL_HPP_
