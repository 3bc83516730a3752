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

#ifndef OTAFL_PRECODING_HPP_
#define OTAFL_PRECODING_HPP_

#include <vector>

#include "otafl/common.hpp"

namespace otafl::precoding {

inline constexpr double kDenominatorFloor = 1e-12;

// Per-round max-over-users expected squared norms of model updates and
// controls. Rounds are 1-based; rounds past the end reuse the last entry.
struct CalibrationTable {
  std::vector<double> m_theta;
  std::vector<double> m_c;

  int rounds_covered() const { return static_cast<int>(m_theta.size()); }
  double m_theta_at(int round) const;
  double m_c_at(int round) const;
  void validate() const;
};

double alpha_r(double power, const CalibrationTable& table, int round);
double beta_r(double power, const CalibrationTable& table, int round);

// Precoders from the bounded-gradient constant instead of a table.
double alpha_from_bound(double power, double eta_tilde, double m2);
double beta_from_bound(double power, double m2);

ParamVector precode_update(const ParamVector& delta, double alpha);

}  // namespace otafl::precoding

#endif  // OTAFL_PRECODING_HPP_
