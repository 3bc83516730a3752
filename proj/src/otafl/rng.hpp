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

#ifndef OTAFL_RNG_HPP_
#define OTAFL_RNG_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

#include "otafl/common.hpp"

namespace otafl {

using Rng = std::mt19937_64;

// Stream tags; every random consumer in a trial draws from its own stream so
// that adding or removing a consumer never shifts another one's draws.
enum class Stream : std::uint64_t {
  kInit = 1,
  kSgd,
  kRefresh,
  kWarmStart,
  kModelNoise,
  kControlNoise,
  kFading,
  kParticipants,
  kCalibration,
  kSubsample,
  kProbe,
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value);
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> keys);

inline Rng make_rng(std::uint64_t seed, Stream stream,
                    std::initializer_list<std::uint64_t> keys = {}) {
  std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(stream));
  for (auto k : keys) s = mix_seed(s, k);
  return Rng(s);
}

// FNV-1a, used to turn configuration text into seeds and hashes.
std::uint64_t hash_string(std::string_view text);

ParamVector standard_normal_vector(Eigen::Index d, Rng& rng);

}  // namespace otafl

#endif  // OTAFL_RNG_HPP_
