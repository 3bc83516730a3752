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

#include "otafl/harness/presets.hpp"

namespace otafl::harness {
namespace {

using nlohmann::json;

json synthetic_base() {
  return {{"task",
           {{"kind", "synthetic"},
            {"num_users", 20},
            {"samples_per_user", 100},
            {"dim", 10},
            {"feature_het", 0.1},
            {"model_het", 1.0},
            {"label_noise_std", 0.1}}},
          {"algorithms",
           {"scaffold_noiseless", "cobaaf", "baaf", "cotaf",
            "fedavg_noisy_const_amp"}},
          {"local_steps", 10},
          {"rounds", 200},
          {"step_size", 1e-2},
          {"batch_size", 10},
          {"power", 1.0},
          {"snr_db", 10.0},
          {"trials", 20},
          {"seed", 2024},
          {"calibration", {{"frac", 0.2}, {"trials", 20}}}};
}

json mnist_base(const std::string& partition) {
  return {{"task",
           {{"kind", "mnist"},
            {"num_users", 10},
            {"samples_per_user", 600},
            {"partition", partition},
            {"skew_frac", 0.2},
            {"l2", 1e-4}}},
          {"local_steps", 5},
          {"rounds", 100},
          {"step_size", 1e-2},
          {"batch_size", 64},
          {"power", 1.0},
          {"snr_db", 10.0},
          {"init_std", 0.01},
          {"trials", 5},
          {"seed", 2024},
          {"calibration", {{"frac", 0.2}, {"trials", 5}}}};
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5"};
}

ExperimentConfig preset(const std::string& name, bool full_scale) {
  json doc;
  if (name == "fig1") {
    doc = synthetic_base();
    doc["title"] = "Linear regression, N=20, K=10, 10 dB";
  } else if (name == "fig2") {
    doc = synthetic_base();
    doc["task"]["num_users"] = 200;
    doc["trials"] = 10;
    doc["title"] = "Linear regression, N=200, K=10, 10 dB";
  } else if (name == "fig3") {
    doc = synthetic_base();
    doc["local_steps"] = 20;
    doc["title"] = "Linear regression, N=20, K=20, 10 dB";
  } else if (name == "fig4") {
    doc = mnist_base("balanced");
    doc["algorithms"] = {"fedavg_noiseless", "baaf", "cotaf",
                         "fedavg_noisy_const_amp"};
    doc["title"] = "MNIST logistic regression, balanced users";
  } else if (name == "fig5") {
    doc = mnist_base("imbalanced");
    doc["algorithms"] = {"scaffold_noiseless", "cobaaf", "baaf", "cotaf",
                         "fedavg_noisy_const_amp"};
    doc["title"] = "MNIST logistic regression, imbalanced users";
  } else {
    fail(ErrorCode::kConfig, "unknown preset '" + name +
                                 "' (expected fig1, fig2, fig3, fig4 or fig5)");
  }
  doc["name"] = name;
  if (full_scale) {
    doc["trials"] = 100;
    doc["calibration"]["trials"] = 100;
  }
  return parse_config(doc);
}

}  // namespace otafl::harness
