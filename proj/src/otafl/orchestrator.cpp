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

#include "otafl/orchestrator.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <utility>

#include "otafl/aggregation.hpp"
#include "otafl/local_update.hpp"

namespace otafl::orchestrator {
namespace {

struct NamedKind {
  const char* name;
  AlgorithmKind kind;
};

constexpr std::array<NamedKind, 7> kNames{{
    {"fedavg_noiseless", AlgorithmKind::kFedAvgNoiseless},
    {"fedavg_noisy_const_amp", AlgorithmKind::kFedAvgNoisyConstAmp},
    {"cotaf", AlgorithmKind::kCotaf},
    {"baaf", AlgorithmKind::kBaaf},
    {"scaffold_noiseless", AlgorithmKind::kScaffoldNoiseless},
    {"cobaaf", AlgorithmKind::kCobaaf},
    {"cobaaf_fading", AlgorithmKind::kCobaafFading},
}};

}  // namespace

const char* algorithm_name(AlgorithmKind kind) {
  for (const auto& n : kNames)
    if (n.kind == kind) return n.name;
  return "unknown";
}

std::optional<AlgorithmKind> parse_algorithm(const std::string& name) {
  for (const auto& n : kNames)
    if (name == n.name) return n.kind;
  return std::nullopt;
}

std::vector<AlgorithmKind> all_algorithms() {
  std::vector<AlgorithmKind> out;
  for (const auto& n : kNames) out.push_back(n.kind);
  return out;
}

bool uses_controls(AlgorithmKind kind) {
  return kind == AlgorithmKind::kScaffoldNoiseless ||
         kind == AlgorithmKind::kCobaaf || kind == AlgorithmKind::kCobaafFading;
}

bool uses_time_varying_precoder(AlgorithmKind kind) {
  return kind == AlgorithmKind::kCotaf || kind == AlgorithmKind::kBaaf ||
         kind == AlgorithmKind::kCobaaf || kind == AlgorithmKind::kCobaafFading;
}

bool uses_mmse(AlgorithmKind kind) {
  return kind == AlgorithmKind::kBaaf || kind == AlgorithmKind::kCobaaf ||
         kind == AlgorithmKind::kCobaafFading;
}

bool is_noisy(AlgorithmKind kind) {
  return kind != AlgorithmKind::kFedAvgNoiseless &&
         kind != AlgorithmKind::kScaffoldNoiseless;
}

AlgorithmKind calibration_mirror(AlgorithmKind kind) {
  return uses_controls(kind) ? AlgorithmKind::kScaffoldNoiseless
                             : AlgorithmKind::kFedAvgNoiseless;
}

void AlgorithmSettings::validate(int num_users) const {
  require(local_steps >= 1, "local_steps must be positive", ErrorCode::kConfig);
  require(rounds >= 1, "rounds must be positive", ErrorCode::kConfig);
  require(step_size >= 0 && std::isfinite(step_size),
          "step_size must be nonnegative", ErrorCode::kConfig);
  require(batch_size >= 1, "batch_size must be positive", ErrorCode::kConfig);
  require(refresh_batch >= 0, "refresh_batch must be nonnegative",
          ErrorCode::kConfig);
  require(participants >= 0 && participants <= num_users,
          "participants must lie in [1, N]", ErrorCode::kConfig);
  require(init_std >= 0, "init_std must be nonnegative", ErrorCode::kConfig);
  require(mu_strong >= 0, "mu_strong must be nonnegative", ErrorCode::kConfig);
  channel.validate();
}

std::vector<int> select_participants(Rng& rng, int num_users, int count) {
  require(num_users >= 1, "num_users must be positive");
  require(count >= 1 && count <= num_users, "participant count outside [1, N]");
  std::vector<int> idx(static_cast<std::size_t>(num_users));
  std::iota(idx.begin(), idx.end(), 0);
  for (int k = 0; k < count; ++k) {
    std::uniform_int_distribution<int> pick(k, num_users - 1);
    std::swap(idx[static_cast<std::size_t>(k)],
              idx[static_cast<std::size_t>(pick(rng))]);
  }
  idx.resize(static_cast<std::size_t>(count));
  std::sort(idx.begin(), idx.end());
  return idx;
}

TrialResult run_trial(AlgorithmKind kind, const RunContext& ctx,
                      std::uint64_t seed, RoundObserver* observer) {
  require(ctx.data != nullptr && !ctx.data->users.empty(),
          "run needs a nonempty dataset");
  const auto& fed = *ctx.data;
  const auto& s = ctx.settings;
  const int num_users = static_cast<int>(fed.num_users());
  s.validate(num_users);
  const Eigen::Index d = fed.param_dim();
  const bool controls = uses_controls(kind);
  const bool want_controls = controls || observer != nullptr;
  const bool fading = kind == AlgorithmKind::kCobaafFading;
  const bool unit = s.channel.fading.family == channel::FadingFamily::kUnit;
  const bool inverted = fading && !unit;
  const int per_round = fading && s.participants > 0 ? s.participants : num_users;
  const double h_eff = inverted ? s.channel.h_min : 1.0;
  const double rho_eff = inverted ? s.channel.rho_min : 1.0;
  const double noise_var = s.channel.resolved_noise_var();
  const double power = s.channel.power;
  const int refresh_batch = s.resolved_refresh_batch();
  if (uses_time_varying_precoder(kind))
    require(ctx.calibration != nullptr, "missing calibration",
            ErrorCode::kConfig);

  Rng init_rng = make_rng(seed, Stream::kInit);
  ParamVector theta = s.init_std * standard_normal_vector(d, init_rng);
  std::vector<ParamVector> history{theta};

  std::vector<ParamVector> c(static_cast<std::size_t>(num_users),
                             ParamVector::Zero(d));
  ParamVector c_hat = ParamVector::Zero(d);
  if (controls) {
    ParamVector sum = ParamVector::Zero(d);
    for (int i = 0; i < num_users; ++i) {
      Rng rng = make_rng(seed, Stream::kWarmStart, {std::uint64_t(i)});
      c[i] = local::refresh_control(fed, fed.users[i], theta, refresh_batch, rng);
      sum += c[i];
    }
    c_hat = sum / static_cast<double>(num_users);
  }

  TrialResult result;
  std::vector<int> part(static_cast<std::size_t>(num_users));
  std::iota(part.begin(), part.end(), 0);

  for (int r = 1; r <= s.rounds; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto ur = static_cast<std::uint64_t>(r);
    if (fading) {
      Rng rng = make_rng(seed, Stream::kParticipants, {ur});
      part = select_participants(rng, num_users, per_round);
    }
    const std::size_t n = part.size();
    std::vector<double> h(n, 1.0), rho(n, 1.0);
    if (inverted) {
      Rng rng = make_rng(seed, Stream::kFading, {ur});
      for (std::size_t k = 0; k < n; ++k) {
        h[k] = channel::draw_magnitude_above(s.channel.fading, s.channel.h_min, rng);
        rho[k] = channel::draw_magnitude_above(s.channel.fading, s.channel.rho_min, rng);
      }
    }

    ParamVector sum_delta = ParamVector::Zero(d);
    std::vector<double> delta_sq(n, 0.0);
    std::vector<ParamVector> c_new;
    for (std::size_t k = 0; k < n; ++k) {
      const int i = part[k];
      const auto& user = fed.users[static_cast<std::size_t>(i)];
      Rng sgd = make_rng(seed, Stream::kSgd, {ur, std::uint64_t(i)});
      ParamVector theta_i =
          controls ? local::local_controlled_round(fed, user, theta,
                                                   s.local_steps, s.step_size,
                                                   c[i], c_hat, s.batch_size, sgd)
                   : local::local_sgd_round(fed, user, theta, s.local_steps,
                                            s.step_size, s.batch_size, sgd);
      const ParamVector delta = theta_i - theta;
      sum_delta += delta;
      delta_sq[k] = delta.squaredNorm();
      if (want_controls) {
        Rng rng = make_rng(seed, Stream::kRefresh, {ur, std::uint64_t(i)});
        c_new.push_back(local::refresh_control(
            fed, user, s.refresh_at_local ? theta_i : theta, refresh_batch, rng));
      }
      if (observer != nullptr)
        observer->on_user(r, i, theta_i, delta,
                          want_controls ? c_new.back() : ParamVector());
    }

    const double nd = static_cast<double>(n);
    ParamVector next = theta + sum_delta / nd;
    double tx_power = 0.0;
    double control_power = 0.0;
    if (kind == AlgorithmKind::kFedAvgNoisyConstAmp) {
      Rng rng = make_rng(seed, Stream::kModelNoise, {ur});
      next += channel::draw_noise(d, noise_var, rng) / (nd * power);
      for (double q : delta_sq) tx_power += power * power * q;
      tx_power /= nd;
    } else if (uses_time_varying_precoder(kind)) {
      const double alpha = precoding::alpha_r(power, ctx.calibration->table, r);
      Rng rng = make_rng(seed, Stream::kModelNoise, {ur});
      next += channel::draw_noise(d, noise_var, rng) /
              (nd * std::sqrt(alpha) * h_eff);
      if (uses_mmse(kind)) {
        const auto prior =
            priors::aggregate_prior(ctx.calibration->priors.at(r), part);
        const double eff = noise_var / (nd * nd * alpha * h_eff * h_eff);
        next = aggregation::mmse_shrink(next, eff, prior.mu, prior.sigma2);
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double g = h_eff / h[k];
        tx_power += alpha * g * g * delta_sq[k];
      }
      tx_power /= nd;
    }

    if (controls) {
      ParamVector sum_c = ParamVector::Zero(d);
      for (const auto& v : c_new) sum_c += v;
      ParamVector c_next = sum_c / nd;
      if (kind != AlgorithmKind::kScaffoldNoiseless) {
        const double beta = precoding::beta_r(power, ctx.calibration->table, r);
        Rng rng = make_rng(seed, Stream::kControlNoise, {ur});
        c_next += channel::draw_noise(d, noise_var, rng) /
                  (nd * std::sqrt(beta) * rho_eff);
        const auto prior =
            priors::aggregate_prior(ctx.calibration->priors.at(r), part);
        const double eff = noise_var / (nd * nd * beta * rho_eff * rho_eff);
        c_next = aggregation::mmse_shrink(c_next, eff, prior.b, prior.v2);
        for (std::size_t k = 0; k < n; ++k) {
          const double g = rho_eff / rho[k];
          control_power += beta * g * g * c_new[k].squaredNorm();
        }
        control_power /= nd;
      }
      for (std::size_t k = 0; k < n; ++k) c[part[k]] = std::move(c_new[k]);
      c_hat = std::move(c_next);
    }

    theta = std::move(next);
    history.push_back(theta);

    RoundMetrics m;
    m.round = r;
    m.participants = static_cast<int>(n);
    m.mean_tx_power = tx_power;
    m.mean_control_power = control_power;
    if (ctx.optimum != nullptr) {
      m.loss_gap = tasks::global_loss(fed, theta) - ctx.optimum->f_star;
      if (ctx.test != nullptr &&
          fed.kind == tasks::TaskKind::kLogisticRegression)
        m.accuracy = tasks::accuracy(fed, *ctx.test, theta);
    }
    m.wallclock_s = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    result.rounds.push_back(m);
  }

  result.final_model = theta;
  const local::OutputSchedule schedule{
      s.mu_strong, static_cast<double>(s.local_steps) * s.step_size};
  if (s.mu_strong > 0 && schedule.mu_strong * schedule.eta_tilde < 2.0)
    result.weighted_model = local::weighted_output(history, schedule);
  else
    result.weighted_model = theta;
  if (ctx.optimum != nullptr)
    result.weighted_loss_gap =
        tasks::global_loss(fed, result.weighted_model) - ctx.optimum->f_star;
  return result;
}

TrialResult run_fedavg_noiseless(const RunContext& ctx, std::uint64_t seed) {
  return run_trial(AlgorithmKind::kFedAvgNoiseless, ctx, seed);
}
TrialResult run_noisy_fedavg(const RunContext& ctx, std::uint64_t seed) {
  return run_trial(AlgorithmKind::kFedAvgNoisyConstAmp, ctx, seed);
}
TrialResult run_cotaf(const RunContext& ctx, std::uint64_t seed) {
  return run_trial(AlgorithmKind::kCotaf, ctx, seed);
}
TrialResult run_baaf(const RunContext& ctx, std::uint64_t seed) {
  return run_trial(AlgorithmKind::kBaaf, ctx, seed);
}
TrialResult run_scaffold_noiseless(const RunContext& ctx, std::uint64_t seed) {
  return run_trial(AlgorithmKind::kScaffoldNoiseless, ctx, seed);
}
TrialResult run_cobaaf(const RunContext& ctx, std::uint64_t seed) {
  return run_trial(AlgorithmKind::kCobaaf, ctx, seed);
}
TrialResult run_cobaaf_fading(const RunContext& ctx, std::uint64_t seed) {
  return run_trial(AlgorithmKind::kCobaafFading, ctx, seed);
}

}  // namespace otafl::orchestrator
