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

#include "otafl/channel.hpp"

#include <cmath>
#include <numbers>

namespace otafl::channel {

void FadingSpec::validate() const {
  switch (family) {
    case FadingFamily::kUnit:
      return;
    case FadingFamily::kRayleigh:
      require(scale > 0 && std::isfinite(scale), "rayleigh scale must be positive",
              ErrorCode::kConfig);
      return;
    case FadingFamily::kUniform:
      require(lo > 0 && hi > lo && std::isfinite(hi),
              "uniform fading needs 0 < lo < hi", ErrorCode::kConfig);
      return;
  }
}

void ChannelConfig::validate() const {
  require(power > 0 && std::isfinite(power), "power must be positive",
          ErrorCode::kConfig);
  require(noise_var.has_value() != snr_db.has_value(),
          "exactly one of noise_var and snr_db must be set", ErrorCode::kConfig);
  if (noise_var)
    require(*noise_var >= 0 && std::isfinite(*noise_var),
            "noise_var must be nonnegative", ErrorCode::kConfig);
  require(h_min > 0 && h_min <= 1, "h_min must lie in (0, 1]",
          ErrorCode::kConfig);
  require(rho_min > 0 && rho_min <= 1, "rho_min must lie in (0, 1]",
          ErrorCode::kConfig);
  fading.validate();
}

double ChannelConfig::resolved_noise_var() const {
  return noise_var ? *noise_var : snr_to_noise(*snr_db, power);
}

FadeDraw FadeDraw::unit(std::size_t n) {
  return FadeDraw{std::vector<double>(n, 1.0), std::vector<double>(n, 0.0)};
}

double snr_to_noise(double snr_db, double power) {
  require(power > 0, "power must be positive");
  return power / std::pow(10.0, snr_db / 10.0);
}

ParamVector draw_noise(Eigen::Index d, double noise_var, Rng& rng) {
  require(noise_var >= 0, "noise variance must be nonnegative");
  return std::sqrt(noise_var) * standard_normal_vector(d, rng);
}

ParamVector mac_transmit(const std::vector<ParamVector>& inputs,
                         const FadeDraw& fades, double noise_var, Rng& rng) {
  require(!inputs.empty(), "no transmitters");
  require(fades.magnitude.size() == inputs.size(),
          "fade count differs from transmitter count");
  const Eigen::Index d = inputs.front().size();
  ParamVector y = ParamVector::Zero(d);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    require(inputs[i].size() == d, "transmitter dimension mismatch");
    y += fades.magnitude[i] * inputs[i];
  }
  y += draw_noise(d, noise_var, rng);
  return y;
}

double draw_magnitude(const FadingSpec& spec, Rng& rng) {
  switch (spec.family) {
    case FadingFamily::kUnit:
      return 1.0;
    case FadingFamily::kRayleigh: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      // Inverse CDF; 1 - u keeps the argument of log away from zero.
      return spec.scale * std::sqrt(-2.0 * std::log(1.0 - u(rng)));
    }
    case FadingFamily::kUniform: {
      std::uniform_real_distribution<double> u(spec.lo, spec.hi);
      return u(rng);
    }
  }
  return 1.0;
}

FadeDraw draw_fading(const FadingSpec& spec, int num_users, Rng& rng) {
  require(num_users >= 1, "num_users must be positive");
  spec.validate();
  const auto n = static_cast<std::size_t>(num_users);
  if (spec.family == FadingFamily::kUnit) return FadeDraw::unit(n);
  FadeDraw out;
  std::uniform_real_distribution<double> phase(-std::numbers::pi,
                                               std::numbers::pi);
  for (std::size_t i = 0; i < n; ++i) {
    out.magnitude.push_back(draw_magnitude(spec, rng));
    out.phase.push_back(phase(rng));
  }
  return out;
}

double draw_magnitude_above(const FadingSpec& spec, double threshold,
                            Rng& rng) {
  if (spec.family == FadingFamily::kUnit) return 1.0;
  if (spec.family == FadingFamily::kUniform)
    require(spec.hi > threshold, "fading never exceeds the threshold",
            ErrorCode::kConfig);
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    const double h = draw_magnitude(spec, rng);
    if (h > threshold) return h;
  }
  fail(ErrorCode::kRuntime, "fading rejection sampling did not terminate");
}

std::optional<ParamVector> truncated_inversion_precode(
    const ParamVector& update, double h, double phase, double h_min,
    double amp) {
  require(h > 0, "fade magnitude must be positive");
  require(amp >= 0, "amplification must be nonnegative");
  (void)phase;  // compensated at the transmitter, the effective gain is real
  if (!(h > h_min)) return std::nullopt;
  return ParamVector((std::sqrt(amp) * h_min / h) * update);
}

double audit_power(const ParamVector& x, double /*power*/) {
  return x.squaredNorm();
}

}  // namespace otafl::channel
