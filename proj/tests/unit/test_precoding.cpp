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

#include <cmath>

#include "otafl/precoding.hpp"
#include "test_util.hpp"

namespace otafl::precoding {
namespace {

TEST(Precoding, AlphaTimesDenominatorIsPower) {
  CalibrationTable t{{4.0, 2.0, 0.5}, {100.0, 10.0, 1.0}};
  for (int r = 1; r <= 3; ++r) {
    EXPECT_DOUBLE_EQ(alpha_r(2.0, t, r) * t.m_theta_at(r), 2.0);
    EXPECT_DOUBLE_EQ(beta_r(2.0, t, r) * t.m_c_at(r), 2.0);
  }
  EXPECT_DOUBLE_EQ(alpha_r(1.0, t, 1), 0.25);
  EXPECT_DOUBLE_EQ(beta_r(1.0, t, 2), 0.1);
}

TEST(Precoding, HoldLastExtension) {
  CalibrationTable t{{4.0, 2.0}, {3.0, 1.0}};
  EXPECT_DOUBLE_EQ(alpha_r(1.0, t, 50), 0.5);
  EXPECT_DOUBLE_EQ(beta_r(1.0, t, 3), 1.0);
  EXPECT_THROW(alpha_r(1.0, t, 0), Error);
}

TEST(Precoding, DenominatorFloor) {
  CalibrationTable t{{0.0}, {0.0}};
  EXPECT_DOUBLE_EQ(alpha_r(1.0, t, 1), 1.0 / kDenominatorFloor);
  EXPECT_DOUBLE_EQ(alpha_from_bound(1.0, 0.0, 5.0), 1.0 / kDenominatorFloor);
  EXPECT_THROW(t.validate(), Error);
}

TEST(Precoding, BoundMode) {
  EXPECT_DOUBLE_EQ(alpha_from_bound(2.0, 0.1, 50.0), 2.0 / (0.01 * 50.0));
  EXPECT_DOUBLE_EQ(beta_from_bound(2.0, 8.0), 0.25);
}

TEST(Precoding, ExpectedPowerEqualsBudget) {
  const double m = 3.0;
  CalibrationTable t{{m}, {m}};
  const double alpha = alpha_r(1.5, t, 1);
  Rng rng(1);
  double total = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const ParamVector delta = standard_normal_vector(3, rng);
    total += precode_update(delta, alpha).squaredNorm();
  }
  EXPECT_NEAR(total / n, 1.5, 4 * 1.5 * std::sqrt(2.0 / 3.0 / n));
}

TEST(Precoding, ScalesBySquareRoot) {
  const ParamVector d = ParamVector::Constant(2, 3.0);
  EXPECT_TRUE((precode_update(d, 4.0).array() == 6.0).all());
  EXPECT_THROW(precode_update(d, -1.0), Error);
}

}  // namespace
}  // namespace otafl::precoding
