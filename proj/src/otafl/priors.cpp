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

#include "otafl/priors.hpp"

#include <algorithm>
#include <cmath>

namespace otafl::priors {

void MomentAccumulator::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void MomentAccumulator::add(const ParamVector& v) {
  for (Eigen::Index m = 0; m < v.size(); ++m) add(v[m]);
}

double MomentAccumulator::variance() const {
  require(count_ >= 2, "fewer than 2 samples for a variance",
          ErrorCode::kInsufficientData);
  return std::max(m2_ / static_cast<double>(count_ - 1), 0.0);
}

PriorMoments estimate_prior_moments(const MomentAccumulator& models,
                                    const MomentAccumulator& controls) {
  return PriorMoments{models.mean(), models.variance(), controls.mean(),
                      controls.variance()};
}

PriorMoments estimate_prior_moments(const std::vector<ParamVector>& models,
                                    const std::vector<ParamVector>& controls) {
  MomentAccumulator a, c;
  for (const auto& v : models) a.add(v);
  for (const auto& v : controls) c.add(v);
  return estimate_prior_moments(a, c);
}

const std::vector<PriorMoments>& PriorTable::at(int round) const {
  require(!rounds.empty(), "empty prior table");
  require(round >= 1, "rounds are numbered from 1");
  return rounds[std::min<std::size_t>(static_cast<std::size_t>(round - 1),
                                      rounds.size() - 1)];
}

AggregatedPrior aggregate_prior(const std::vector<PriorMoments>& users) {
  require(!users.empty(), "cannot aggregate an empty prior list");
  AggregatedPrior out;
  for (const auto& p : users) {
    out.mu += p.mu;
    out.sigma2 += p.sigma2;
    out.b += p.b;
    out.v2 += p.v2;
  }
  const double n = static_cast<double>(users.size());
  out.mu /= n;
  out.b /= n;
  out.sigma2 /= n * n;
  out.v2 /= n * n;
  return out;
}

AggregatedPrior aggregate_prior(const std::vector<PriorMoments>& users,
                                const std::vector<int>& subset) {
  std::vector<PriorMoments> picked;
  picked.reserve(subset.size());
  for (int i : subset) {
    require(i >= 0 && static_cast<std::size_t>(i) < users.size(),
            "participant index out of range");
    picked.push_back(users[static_cast<std::size_t>(i)]);
  }
  return aggregate_prior(picked);
}

}  // namespace otafl::priors
