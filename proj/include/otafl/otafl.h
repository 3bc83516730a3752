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

/* C interface to the over-the-air federated learning simulator. */

#ifndef OTAFL_OTAFL_H_
#define OTAFL_OTAFL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define OTAFL_API __declspec(dllexport)
#else
#define OTAFL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum otafl_status {
  OTAFL_OK = 0,
  OTAFL_ERR_INVALID_ARGUMENT = 1,
  OTAFL_ERR_CONFIG = 2,
  OTAFL_ERR_IO = 3,
  OTAFL_ERR_FORMAT = 4,
  OTAFL_ERR_SINGULAR = 5,
  OTAFL_ERR_INSUFFICIENT_DATA = 6,
  OTAFL_ERR_RUNTIME = 7
} otafl_status;

typedef struct otafl_experiment otafl_experiment;
typedef struct otafl_result otafl_result;

/* One aggregated (algorithm, round) row. Undefined values are NaN. The
 * algorithm string is owned by the result. */
typedef struct otafl_row {
  const char* algorithm;
  int round;
  double mean_loss_gap;
  double se_loss_gap;
  double mean_accuracy;
  double se_accuracy;
  double mean_tx_power;
  double participants;
} otafl_row;

typedef struct otafl_bound_constants {
  double mu;
  double beta;
  double sigma2;
  double m2;
  double g2;
  double b2;
  double sigma_theta;
  double sigma_c;
  double sigma_c_tilde;
  double d;
  double n;
  double k;
  double power;
  double s;
  double h_min;
  double d0;
  double d_tilde2;
} otafl_bound_constants;

OTAFL_API const char* otafl_version(void);

/* Message of the last failed call on this thread; empty if none. */
OTAFL_API const char* otafl_last_error(void);
OTAFL_API const char* otafl_status_name(otafl_status status);

OTAFL_API otafl_status otafl_experiment_from_json(const char* json,
                                                  otafl_experiment** out);
OTAFL_API otafl_status otafl_experiment_from_file(const char* path,
                                                  otafl_experiment** out);
OTAFL_API otafl_status otafl_experiment_preset(const char* name,
                                               int full_scale,
                                               otafl_experiment** out);
OTAFL_API void otafl_experiment_free(otafl_experiment* exp);

OTAFL_API otafl_status otafl_experiment_set_trials(otafl_experiment* exp,
                                                   int trials);
OTAFL_API otafl_status otafl_experiment_set_seed(otafl_experiment* exp,
                                                 uint64_t seed);
OTAFL_API otafl_status otafl_experiment_set_workers(otafl_experiment* exp,
                                                    int workers);
OTAFL_API otafl_status otafl_experiment_set_output_dir(otafl_experiment* exp,
                                                       const char* dir);
OTAFL_API const char* otafl_experiment_name(const otafl_experiment* exp);
OTAFL_API const char* otafl_experiment_output_dir(const otafl_experiment* exp);

/* Full config echo; release with otafl_string_free. */
OTAFL_API otafl_status otafl_experiment_to_json(const otafl_experiment* exp,
                                                char** out);
OTAFL_API void otafl_string_free(char* s);

/* Runs the offline calibration and writes it to path. */
OTAFL_API otafl_status otafl_calibrate(const otafl_experiment* exp,
                                       const char* path);

OTAFL_API otafl_status otafl_run(const otafl_experiment* exp,
                                 otafl_result** out);
OTAFL_API otafl_status otafl_result_read_csv(const char* path,
                                             otafl_result** out);
OTAFL_API void otafl_result_free(otafl_result* result);

OTAFL_API size_t otafl_result_row_count(const otafl_result* result);
OTAFL_API otafl_status otafl_result_row(const otafl_result* result,
                                        size_t index, otafl_row* out);
/* Final-round loss gaps of every trial of one algorithm. Writes at most
 * capacity values and stores the trial count in *count. */
OTAFL_API otafl_status otafl_result_final_losses(const otafl_result* result,
                                                 const char* algorithm,
                                                 double* values,
                                                 size_t capacity,
                                                 size_t* count);

OTAFL_API otafl_status otafl_result_write_csv(const otafl_result* result,
                                              const char* path);
OTAFL_API otafl_status otafl_result_write_json(const otafl_result* result,
                                               const char* path);
OTAFL_API otafl_status otafl_result_write_svg(const otafl_result* result,
                                              const char* path);

OTAFL_API otafl_status otafl_snr_to_noise(double snr_db, double power,
                                          double* out);
/* Per-coordinate Gaussian shrinkage of x toward prior_mean; out may alias x. */
OTAFL_API otafl_status otafl_mmse_shrink(const double* x, size_t d,
                                         double effective_noise_var,
                                         double prior_mean, double prior_var,
                                         double* out);
OTAFL_API otafl_status otafl_analytic_mse(int num_users, double alpha,
                                          double noise_var, double prior_var,
                                          double* out);
/* which is 1, 2 or 3. */
OTAFL_API otafl_status otafl_theorem_bound(int which,
                                           const otafl_bound_constants* c,
                                           double rounds,
                                           int check_precondition,
                                           double* out);

#ifdef __cplusplus
}
#endif

#endif /* OTAFL_OTAFL_H_ */
