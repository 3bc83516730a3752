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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "otafl/otafl.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int report(otafl_status status) {
  if (status == OTAFL_OK) return kExitOk;
  std::cerr << "otafl: " << otafl_status_name(status) << " error: "
            << otafl_last_error() << "\n";
  return status == OTAFL_ERR_CONFIG || status == OTAFL_ERR_INVALID_ARGUMENT
             ? kExitConfig
             : kExitRuntime;
}

struct Overrides {
  std::string out;
  int workers = 0;
  int trials = 0;
  std::int64_t seed = -1;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--workers", o.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--trials", o.trials, "Monte-Carlo trials")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Master seed")->check(CLI::NonNegativeNumber);
}

otafl_status apply(otafl_experiment* exp, const Overrides& o) {
  otafl_status s = OTAFL_OK;
  if (!o.out.empty() && s == OTAFL_OK)
    s = otafl_experiment_set_output_dir(exp, o.out.c_str());
  if (o.workers > 0 && s == OTAFL_OK) s = otafl_experiment_set_workers(exp, o.workers);
  if (o.trials > 0 && s == OTAFL_OK) s = otafl_experiment_set_trials(exp, o.trials);
  if (o.seed >= 0 && s == OTAFL_OK)
    s = otafl_experiment_set_seed(exp, static_cast<std::uint64_t>(o.seed));
  return s;
}

std::string output_path(const otafl_experiment* exp, const std::string& suffix) {
  const std::filesystem::path dir = otafl_experiment_output_dir(exp);
  return (dir / (std::string(otafl_experiment_name(exp)) + suffix)).string();
}

int run_and_write(otafl_experiment* exp) {
  otafl_result* result = nullptr;
  otafl_status s = otafl_run(exp, &result);
  const std::string csv = output_path(exp, ".csv");
  const std::string json = output_path(exp, ".json");
  const std::string svg = output_path(exp, ".svg");
  if (s == OTAFL_OK) s = otafl_result_write_csv(result, csv.c_str());
  if (s == OTAFL_OK) s = otafl_result_write_json(result, json.c_str());
  if (s == OTAFL_OK) s = otafl_result_write_svg(result, svg.c_str());
  otafl_result_free(result);
  if (s == OTAFL_OK) std::cout << "wrote " << csv << ", " << json << ", " << svg << "\n";
  return report(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated learning over noisy and fading multiple-access channels"};
  app.set_version_flag("--version", std::string(otafl_version()));
  app.require_subcommand(1);

  std::string config_path;
  Overrides cal_o, run_o, rep_o;

  auto* calibrate = app.add_subcommand("calibrate", "Run the offline precoder calibration");
  calibrate->add_option("--config", config_path, "Experiment config (JSON)")->required();
  calibrate->add_option("--out", cal_o.out, "Output directory");
  calibrate->add_option("--seed", cal_o.seed, "Master seed")
      ->check(CLI::NonNegativeNumber);

  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  add_overrides(run, run_o);

  std::string plot_in, plot_out;
  auto* plot = app.add_subcommand("plot", "Render a result CSV as SVG");
  plot->add_option("--in", plot_in, "Result CSV")->required();
  plot->add_option("--out", plot_out, "SVG path (default: next to the CSV)");

  std::string figure;
  bool full_scale = false;
  auto* reproduce = app.add_subcommand("reproduce", "Run a pinned figure configuration");
  reproduce->add_option("figure", figure, "fig1, fig2, fig3, fig4 or fig5")->required();
  reproduce->add_flag("--full-scale", full_scale, "Use the full trial count");
  add_overrides(reproduce, rep_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "otafl: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  otafl_experiment* exp = nullptr;
  int code = kExitOk;
  if (*calibrate) {
    otafl_status s = otafl_experiment_from_file(config_path.c_str(), &exp);
    if (s == OTAFL_OK) s = apply(exp, cal_o);
    std::string path;
    if (s == OTAFL_OK) {
      path = output_path(exp, ".calibration.json");
      s = otafl_calibrate(exp, path.c_str());
    }
    if (s == OTAFL_OK) std::cout << "wrote " << path << "\n";
    code = report(s);
  } else if (*run) {
    otafl_status s = otafl_experiment_from_file(config_path.c_str(), &exp);
    if (s == OTAFL_OK) s = apply(exp, run_o);
    code = s == OTAFL_OK ? run_and_write(exp) : report(s);
  } else if (*plot) {
    otafl_result* result = nullptr;
    if (plot_out.empty())
      plot_out = std::filesystem::path(plot_in).replace_extension(".svg").string();
    otafl_status s = otafl_result_read_csv(plot_in.c_str(), &result);
    if (s == OTAFL_OK) s = otafl_result_write_svg(result, plot_out.c_str());
    otafl_result_free(result);
    if (s == OTAFL_OK) std::cout << "wrote " << plot_out << "\n";
    code = report(s);
  } else if (*reproduce) {
    otafl_status s = otafl_experiment_preset(figure.c_str(), full_scale ? 1 : 0, &exp);
    if (s == OTAFL_OK) s = apply(exp, rep_o);
    code = s == OTAFL_OK ? run_and_write(exp) : report(s);
  }
  otafl_experiment_free(exp);
  return code;
}
