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

#ifndef OTAFL_PRIORS_HPP_
#define OTAFL_PRIORS_HPP_

#include <cstdint>
#include <vector>

#include "otafl/common.hpp"

namespace otafl::priors {

// Gaussian prior of one user in one round: model coordinates ~ N(mu, sigma2),
// control coordinates ~ N(b, v2).
struct PriorMoments {
  double mu = 0.0;
  double sigma2 = 0.0;
  double b = 0.0;
  double v2 = 0.0;
};

struct AggregatedPrior {
  double mu = 0.0;
  double sigma2 = 0.0;
  double b = 0.0;
  double v2 = 0.0;
};

// Streaming pooled mean/variance (Welford) over scalars and whole vectors.
class MomentAccumulator {
 public:
  void add(double x);
  void add(const ParamVector& v);

  std::int64_t count() const { return count_; }
  double mean() const { return mean_; }
  // Unbiased sample variance; needs at least two samples.
  double variance() const;

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

PriorMoments estimate_prior_moments(const MomentAccumulator& models,
                                    const MomentAccumulator& controls);
PriorMoments estimate_prior_moments(const std::vector<ParamVector>& models,
                                    const std::vector<ParamVector>& controls);

// Prior moments indexed [round - 1][user]; later rounds reuse the last.
struct PriorTable {
  std::vector<std::vector<PriorMoments>> rounds;

  const std::vector<PriorMoments>& at(int round) const;
};

AggregatedPrior aggregate_prior(const std::vector<PriorMoments>& users);
AggregatedPrior aggregate_prior(const std::vector<PriorMoments>& users,
                                const std::vector<int>& subset);

}  // namespace otafl::priors

#endif  // OTAFL_PRIORS_HPP_
