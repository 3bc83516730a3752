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

#include "otafl/otafl.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "otafl/aggregation.hpp"
#include "otafl/bounds.hpp"
#include "otafl/channel.hpp"
#include "otafl/harness/calibration_io.hpp"
#include "otafl/harness/experiment.hpp"
#include "otafl/harness/presets.hpp"
#include "otafl/harness/report.hpp"
#include "otafl/version.hpp"

struct otafl_experiment {
  otafl::harness::ExperimentConfig config;
};

struct otafl_result {
  otafl::harness::ResultTable table;
};

namespace {

thread_local std::string g_last_error;

otafl_status to_status(otafl::ErrorCode code) {
  using otafl::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return OTAFL_ERR_INVALID_ARGUMENT;
    case ErrorCode::kConfig: return OTAFL_ERR_CONFIG;
    case ErrorCode::kIo: return OTAFL_ERR_IO;
    case ErrorCode::kBadMagic:
    case ErrorCode::kTruncated:
    case ErrorCode::kCountMismatch: return OTAFL_ERR_FORMAT;
    case ErrorCode::kSingular: return OTAFL_ERR_SINGULAR;
    case ErrorCode::kInsufficientData: return OTAFL_ERR_INSUFFICIENT_DATA;
    case ErrorCode::kRuntime: return OTAFL_ERR_RUNTIME;
  }
  return OTAFL_ERR_RUNTIME;
}

otafl_status set_error(otafl_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class F>
otafl_status guard(F&& body) {
  try {
    g_last_error.clear();
    body();
    return OTAFL_OK;
  } catch (const otafl::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(OTAFL_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return set_error(OTAFL_ERR_RUNTIME, e.what());
  } catch (...) {
    return set_error(OTAFL_ERR_RUNTIME, "unknown error");
  }
}

#define OTAFL_REQUIRE_ARG(cond, msg) \
  if (!(cond)) return set_error(OTAFL_ERR_INVALID_ARGUMENT, msg)

double or_nan(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

otafl::bounds::BoundConstants convert(const otafl_bound_constants& c) {
  otafl::bounds::BoundConstants b;
  b.mu = c.mu;
  b.beta = c.beta;
  b.sigma2 = c.sigma2;
  b.m2 = c.m2;
  b.g2 = c.g2;
  b.b2 = c.b2;
  b.sigma_theta = c.sigma_theta;
  b.sigma_c = c.sigma_c;
  b.sigma_c_tilde = c.sigma_c_tilde;
  b.d = c.d;
  b.n = c.n;
  b.k = c.k;
  b.power = c.power;
  b.s = c.s;
  b.h_min = c.h_min;
  b.d0 = c.d0;
  b.d_tilde2 = c.d_tilde2;
  return b;
}

}  // namespace

extern "C" {

const char* otafl_version(void) { return otafl::kVersion; }

const char* otafl_last_error(void) { return g_last_error.c_str(); }

const char* otafl_status_name(otafl_status status) {
  switch (status) {
    case OTAFL_OK: return "ok";
    case OTAFL_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case OTAFL_ERR_CONFIG: return "config";
    case OTAFL_ERR_IO: return "io";
    case OTAFL_ERR_FORMAT: return "format";
    case OTAFL_ERR_SINGULAR: return "singular";
    case OTAFL_ERR_INSUFFICIENT_DATA: return "insufficient_data";
    case OTAFL_ERR_RUNTIME: return "runtime";
  }
  return "unknown";
}

otafl_status otafl_experiment_from_json(const char* json,
                                        otafl_experiment** out) {
  OTAFL_REQUIRE_ARG(json && out, "null argument");
  *out = nullptr;
  return guard([&] {
    *out = new otafl_experiment{otafl::harness::parse_config_text(json)};
  });
}

otafl_status otafl_experiment_from_file(const char* path,
                                        otafl_experiment** out) {
  OTAFL_REQUIRE_ARG(path && out, "null argument");
  *out = nullptr;
  return guard(
      [&] { *out = new otafl_experiment{otafl::harness::load_config(path)}; });
}

otafl_status otafl_experiment_preset(const char* name, int full_scale,
                                     otafl_experiment** out) {
  OTAFL_REQUIRE_ARG(name && out, "null argument");
  *out = nullptr;
  return guard([&] {
    *out = new otafl_experiment{otafl::harness::preset(name, full_scale != 0)};
  });
}

void otafl_experiment_free(otafl_experiment* exp) { delete exp; }

otafl_status otafl_experiment_set_trials(otafl_experiment* exp, int trials) {
  OTAFL_REQUIRE_ARG(exp, "null experiment");
  OTAFL_REQUIRE_ARG(trials >= 1, "trials must be positive");
  exp->config.trials = trials;
  return OTAFL_OK;
}

otafl_status otafl_experiment_set_seed(otafl_experiment* exp, uint64_t seed) {
  OTAFL_REQUIRE_ARG(exp, "null experiment");
  exp->config.seed = seed;
  return OTAFL_OK;
}

otafl_status otafl_experiment_set_workers(otafl_experiment* exp, int workers) {
  OTAFL_REQUIRE_ARG(exp, "null experiment");
  OTAFL_REQUIRE_ARG(workers >= 1, "workers must be positive");
  exp->config.workers = workers;
  return OTAFL_OK;
}

otafl_status otafl_experiment_set_output_dir(otafl_experiment* exp,
                                             const char* dir) {
  OTAFL_REQUIRE_ARG(exp && dir, "null argument");
  exp->config.output_dir = dir;
  return OTAFL_OK;
}

const char* otafl_experiment_name(const otafl_experiment* exp) {
  return exp ? exp->config.name.c_str() : "";
}

const char* otafl_experiment_output_dir(const otafl_experiment* exp) {
  return exp ? exp->config.output_dir.c_str() : "";
}

otafl_status otafl_experiment_to_json(const otafl_experiment* exp, char** out) {
  OTAFL_REQUIRE_ARG(exp && out, "null argument");
  *out = nullptr;
  return guard([&] {
    const std::string text =
        otafl::harness::config_to_json(exp->config).dump(2);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void otafl_string_free(char* s) { delete[] s; }

otafl_status otafl_calibrate(const otafl_experiment* exp, const char* path) {
  OTAFL_REQUIRE_ARG(exp && path, "null argument");
  return guard([&] {
    const auto& cfg = exp->config;
    const auto task = otafl::harness::prepare_task(cfg);
    auto no_reuse = cfg;
    no_reuse.calibration.reuse_path.clear();
    otafl::harness::CalibrationFile file;
    file.config_hash = otafl::harness::config_hash(cfg);
    file.seed = cfg.seed;
    file.calibrations = otafl::harness::prepare_calibrations(no_reuse, task);
    otafl::require(!file.calibrations.empty(),
                   "no configured algorithm uses a calibrated precoder",
                   otafl::ErrorCode::kConfig);
    otafl::harness::write_calibration(path, file);
  });
}

otafl_status otafl_run(const otafl_experiment* exp, otafl_result** out) {
  OTAFL_REQUIRE_ARG(exp && out, "null argument");
  *out = nullptr;
  return guard([&] {
    const auto result = otafl::harness::run_experiment(exp->config);
    *out = new otafl_result{otafl::harness::summarize(result)};
  });
}

otafl_status otafl_result_read_csv(const char* path, otafl_result** out) {
  OTAFL_REQUIRE_ARG(path && out, "null argument");
  *out = nullptr;
  return guard(
      [&] { *out = new otafl_result{otafl::harness::read_csv(path)}; });
}

void otafl_result_free(otafl_result* result) { delete result; }

size_t otafl_result_row_count(const otafl_result* result) {
  return result ? result->table.rows.size() : 0;
}

otafl_status otafl_result_row(const otafl_result* result, size_t index,
                              otafl_row* out) {
  OTAFL_REQUIRE_ARG(result && out, "null argument");
  OTAFL_REQUIRE_ARG(index < result->table.rows.size(), "row index out of range");
  const auto& r = result->table.rows[index];
  *out = otafl_row{r.algorithm.c_str(), r.round,
                   r.mean_loss_gap,     or_nan(r.se_loss_gap),
                   or_nan(r.mean_accuracy), or_nan(r.se_accuracy),
                   r.mean_tx_power,     r.participants};
  return OTAFL_OK;
}

otafl_status otafl_result_final_losses(const otafl_result* result,
                                       const char* algorithm, double* values,
                                       size_t capacity, size_t* count) {
  OTAFL_REQUIRE_ARG(result && algorithm && count, "null argument");
  OTAFL_REQUIRE_ARG(values || capacity == 0, "null output buffer");
  const auto& meta = result->table.metadata;
  if (!meta.is_object() || !meta.contains("algorithms") ||
      !meta["algorithms"].contains(algorithm))
    return set_error(OTAFL_ERR_INVALID_ARGUMENT,
                     std::string("no per-trial data for ") + algorithm);
  const auto& finals = meta["algorithms"][algorithm]["final_loss_gap"];
  *count = finals.size();
  for (size_t k = 0; k < finals.size() && k < capacity; ++k)
    values[k] = finals[k].get<double>();
  return OTAFL_OK;
}

otafl_status otafl_result_write_csv(const otafl_result* result,
                                    const char* path) {
  OTAFL_REQUIRE_ARG(result && path, "null argument");
  return guard([&] { otafl::harness::write_csv(result->table, path); });
}

otafl_status otafl_result_write_json(const otafl_result* result,
                                     const char* path) {
  OTAFL_REQUIRE_ARG(result && path, "null argument");
  return guard([&] { otafl::harness::write_json(result->table, path); });
}

otafl_status otafl_result_write_svg(const otafl_result* result,
                                    const char* path) {
  OTAFL_REQUIRE_ARG(result && path, "null argument");
  return guard([&] { otafl::harness::write_svg(result->table, path); });
}

otafl_status otafl_snr_to_noise(double snr_db, double power, double* out) {
  OTAFL_REQUIRE_ARG(out, "null argument");
  return guard([&] { *out = otafl::channel::snr_to_noise(snr_db, power); });
}

otafl_status otafl_mmse_shrink(const double* x, size_t d,
                               double effective_noise_var, double prior_mean,
                               double prior_var, double* out) {
  OTAFL_REQUIRE_ARG((x && out) || d == 0, "null argument");
  OTAFL_REQUIRE_ARG(effective_noise_var >= 0 && prior_var >= 0,
                    "variances must be nonnegative");
  return guard([&] {
    const Eigen::Map<const Eigen::VectorXd> in(x, static_cast<Eigen::Index>(d));
    const otafl::ParamVector r = otafl::aggregation::mmse_shrink(
        in, effective_noise_var, prior_mean, prior_var);
    std::memmove(out, r.data(), d * sizeof(double));
  });
}

otafl_status otafl_analytic_mse(int num_users, double alpha, double noise_var,
                                double prior_var, double* out) {
  OTAFL_REQUIRE_ARG(out, "null argument");
  OTAFL_REQUIRE_ARG(num_users >= 1, "num_users must be positive");
  return guard([&] {
    otafl::priors::AggregatedPrior prior;
    prior.sigma2 = prior_var;
    *out = otafl::aggregation::analytic_mse(prior, num_users, alpha, noise_var);
  });
}

otafl_status otafl_theorem_bound(int which, const otafl_bound_constants* c,
                                 double rounds, int check_precondition,
                                 double* out) {
  OTAFL_REQUIRE_ARG(c && out, "null argument");
  OTAFL_REQUIRE_ARG(which >= 1 && which <= 3, "theorem index must be 1, 2 or 3");
  return guard([&] {
    const auto b = convert(*c);
    const bool check = check_precondition != 0;
    *out = which == 1   ? otafl::bounds::theorem1_bound(b, rounds, check)
           : which == 2 ? otafl::bounds::theorem2_bound(b, rounds, check)
                        : otafl::bounds::theorem3_bound(b, rounds, check);
  });
}

}  // extern "C"
