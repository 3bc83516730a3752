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

#include "otafl/precoding.hpp"

#include <algorithm>
#include <cmath>

namespace otafl::precoding {
namespace {

double lookup(const std::vector<double>& v, int round) {
  require(!v.empty(), "empty calibration table");
  require(round >= 1, "rounds are numbered from 1");
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(round - 1),
                                         v.size() - 1);
  return std::max(v[idx], kDenominatorFloor);
}

}  // namespace

double CalibrationTable::m_theta_at(int round) const {
  return lookup(m_theta, round);
}

double CalibrationTable::m_c_at(int round) const { return lookup(m_c, round); }

void CalibrationTable::validate() const {
  require(!m_theta.empty() && m_theta.size() == m_c.size(),
          "calibration table must cover at least one round",
          ErrorCode::kConfig);
  for (std::size_t r = 0; r < m_theta.size(); ++r)
    require(m_theta[r] > 0 && std::isfinite(m_theta[r]) && m_c[r] > 0 &&
                std::isfinite(m_c[r]),
            "calibration entries must be positive and finite",
            ErrorCode::kConfig);
}

double alpha_r(double power, const CalibrationTable& table, int round) {
  require(power > 0, "power must be positive");
  return power / table.m_theta_at(round);
}

double beta_r(double power, const CalibrationTable& table, int round) {
  require(power > 0, "power must be positive");
  return power / table.m_c_at(round);
}

double alpha_from_bound(double power, double eta_tilde, double m2) {
  require(power > 0, "power must be positive");
  return power / std::max(eta_tilde * eta_tilde * m2, kDenominatorFloor);
}

double beta_from_bound(double power, double m2) {
  require(power > 0, "power must be positive");
  return power / std::max(m2, kDenominatorFloor);
}

ParamVector precode_update(const ParamVector& delta, double alpha) {
  require(alpha >= 0, "precoding factor must be nonnegative");
  return std::sqrt(alpha) * delta;
}

}  // namespace otafl::precoding
