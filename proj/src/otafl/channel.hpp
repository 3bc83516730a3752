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

#ifndef OTAFL_CHANNEL_HPP_
#define OTAFL_CHANNEL_HPP_

#include <optional>
#include <vector>

#include "otafl/common.hpp"
#include "otafl/rng.hpp"

namespace otafl::channel {

enum class FadingFamily { kUnit, kRayleigh, kUniform };

struct FadingSpec {
  FadingFamily family = FadingFamily::kUnit;
  double scale = 1.0;  // rayleigh
  double lo = 0.5;     // uniform
  double hi = 1.5;

  void validate() const;
};

struct ChannelConfig {
  double power = 1.0;
  std::optional<double> noise_var;
  std::optional<double> snr_db;
  FadingSpec fading;
  double h_min = 1.0;
  double rho_min = 1.0;

  void validate() const;
  double resolved_noise_var() const;
};

// Per-user block-fading magnitudes and phases for one transmission.
struct FadeDraw {
  std::vector<double> magnitude;
  std::vector<double> phase;

  static FadeDraw unit(std::size_t n);
};

double snr_to_noise(double snr_db, double power);

ParamVector draw_noise(Eigen::Index d, double noise_var, Rng& rng);

// Sum_i h_i x_i + w, summed in ascending user order.
ParamVector mac_transmit(const std::vector<ParamVector>& inputs,
                         const FadeDraw& fades, double noise_var, Rng& rng);

double draw_magnitude(const FadingSpec& spec, Rng& rng);
FadeDraw draw_fading(const FadingSpec& spec, int num_users, Rng& rng);

// Magnitude conditioned on h > threshold, by rejection.
double draw_magnitude_above(const FadingSpec& spec, double threshold, Rng& rng);

// Phase-compensated truncated inversion; nullopt means the user is silent.
std::optional<ParamVector> truncated_inversion_precode(
    const ParamVector& update, double h, double phase, double h_min,
    double amp);

double audit_power(const ParamVector& x, double power);

}  // namespace otafl::channel

#endif  // OTAFL_CHANNEL_HPP_
