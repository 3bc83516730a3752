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

#include "otafl/harness/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace otafl::harness {
namespace {

using nlohmann::json;
using orchestrator::AlgorithmKind;

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  fail(ErrorCode::kConfig, "config field '" + field + "': " + why);
}

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) bad(where.empty() ? "<root>" : where, "must be an object");
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      bad(where.empty() ? item.key() : where + "." + item.key(),
          "unknown key");
}

std::string path(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

template <class T>
bool read(const json& obj, const std::string& where, const std::string& key,
          T& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return false;
  const json& v = obj.at(key);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) bad(path(where, key), "must be a boolean");
      out = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) bad(path(where, key), "must be an integer");
      out = v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) bad(path(where, key), "must be a number");
      out = v.get<T>();
    } else {
      if (!v.is_string()) bad(path(where, key), "must be a string");
      out = v.get<std::string>();
    }
  } catch (const json::exception& e) {
    bad(path(where, key), e.what());
  }
  return true;
}

void parse_task(const json& t, ExperimentConfig& cfg) {
  std::string kind = "synthetic";
  if (!t.is_object()) bad("task", "must be an object");
  read(t, "task", "kind", kind);
  TaskSpec& spec = cfg.task;
  if (kind == "synthetic") {
    check_keys(t, "task", {"kind", "num_users", "samples_per_user", "dim",
                           "feature_het", "model_het", "label_noise_std"});
    spec.source = TaskSource::kSynthetic;
    auto& s = spec.synthetic;
    read(t, "task", "num_users", s.num_users);
    read(t, "task", "samples_per_user", s.samples_per_user);
    read(t, "task", "dim", s.dim);
    read(t, "task", "feature_het", s.feature_het);
    read(t, "task", "model_het", s.model_het);
    read(t, "task", "label_noise_std", s.label_noise_std);
    spec.num_users = s.num_users;
    spec.samples_per_user = s.samples_per_user;
  } else if (kind == "mnist") {
    check_keys(t, "task", {"kind", "num_users", "samples_per_user", "data_dir",
                           "partition", "skew_frac", "l2"});
    spec.source = TaskSource::kMnist;
    spec.num_users = 10;
    spec.samples_per_user = 600;
    read(t, "task", "num_users", spec.num_users);
    read(t, "task", "samples_per_user", spec.samples_per_user);
    read(t, "task", "data_dir", spec.data_dir);
    std::string part = "balanced";
    read(t, "task", "partition", part);
    if (part == "balanced")
      spec.partition = Partition::kBalanced;
    else if (part == "imbalanced")
      spec.partition = Partition::kImbalanced;
    else
      bad("task.partition", "expected 'balanced' or 'imbalanced'");
    read(t, "task", "skew_frac", spec.skew_frac);
    read(t, "task", "l2", spec.l2);
  } else {
    bad("task.kind", "expected 'synthetic' or 'mnist', got '" + kind + "'");
  }
}

void parse_fading(const json& f, channel::FadingSpec& spec) {
  check_keys(f, "fading", {"family", "scale", "lo", "hi"});
  std::string family = "unit";
  read(f, "fading", "family", family);
  if (family == "unit")
    spec.family = channel::FadingFamily::kUnit;
  else if (family == "rayleigh")
    spec.family = channel::FadingFamily::kRayleigh;
  else if (family == "uniform")
    spec.family = channel::FadingFamily::kUniform;
  else
    bad("fading.family", "expected 'unit', 'rayleigh' or 'uniform'");
  read(f, "fading", "scale", spec.scale);
  read(f, "fading", "lo", spec.lo);
  read(f, "fading", "hi", spec.hi);
}

const char* family_name(channel::FadingFamily f) {
  switch (f) {
    case channel::FadingFamily::kUnit: return "unit";
    case channel::FadingFamily::kRayleigh: return "rayleigh";
    case channel::FadingFamily::kUniform: return "uniform";
  }
  return "unit";
}

}  // namespace

void ExperimentConfig::validate() const {
  auto check = [](bool ok, const std::string& field, const std::string& why) {
    if (!ok) bad(field, why);
  };
  check(!algorithms.empty(), "algorithms", "must list at least one algorithm");
  check(trials >= 1, "trials", "must be positive");
  check(workers >= 1, "workers", "must be positive");
  check(task.num_users >= 1, "task.num_users", "must be positive");
  check(task.samples_per_user >= 1, "task.samples_per_user", "must be positive");
  if (task.source == TaskSource::kSynthetic) {
    check(task.synthetic.dim >= 1, "task.dim", "must be positive");
    check(task.synthetic.feature_het >= 0, "task.feature_het", "must be nonnegative");
    check(task.synthetic.model_het >= 0, "task.model_het", "must be nonnegative");
    check(task.synthetic.label_noise_std >= 0, "task.label_noise_std",
          "must be nonnegative");
  } else {
    check(task.skew_frac >= 0 && task.skew_frac <= 1, "task.skew_frac",
          "must lie in [0, 1]");
    check(task.l2 > 0, "task.l2", "must be positive");
    if (task.partition == Partition::kImbalanced)
      check(task.num_users <= 10, "task.num_users",
            "imbalanced partition supports at most 10 users");
  }
  check(settings.batch_size <= task.samples_per_user, "batch_size",
        "must not exceed samples_per_user");
  check(calibration.frac > 0 && calibration.frac <= 1, "calibration.frac",
        "must lie in (0, 1]");
  check(calibration.trials >= 1, "calibration.trials", "must be positive");
  check(settings.participants <= task.num_users, "participants",
        "must not exceed num_users");
  try {
    settings.validate(task.num_users);
  } catch (const Error& e) {
    bad("settings", e.what());
  }
}

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc, "",
             {"name", "title", "task", "algorithms", "local_steps", "rounds",
              "step_size", "batch_size", "refresh_batch", "power", "snr_db",
              "noise_var", "fading", "h_min", "rho_min", "participants",
              "refresh_at_local", "init_std", "weighted_output", "trials",
              "seed", "workers", "calibration", "output_dir"});
  ExperimentConfig cfg;
  read(doc, "", "name", cfg.name);
  read(doc, "", "title", cfg.title);
  if (doc.contains("task")) parse_task(doc.at("task"), cfg);
  const bool mnist = cfg.task.source == TaskSource::kMnist;

  if (!doc.contains("algorithms") || !doc.at("algorithms").is_array())
    bad("algorithms", "must be an array of algorithm names");
  for (const auto& a : doc.at("algorithms")) {
    if (!a.is_string()) bad("algorithms", "entries must be strings");
    const auto kind = orchestrator::parse_algorithm(a.get<std::string>());
    if (!kind) bad("algorithms", "unknown algorithm '" + a.get<std::string>() + "'");
    cfg.algorithms.push_back(*kind);
  }

  auto& s = cfg.settings;
  s.rounds = mnist ? 100 : 200;
  s.local_steps = mnist ? 5 : 10;
  s.batch_size = mnist ? 64 : 10;
  s.init_std = mnist ? 0.01 : 1.0;
  read(doc, "", "local_steps", s.local_steps);
  read(doc, "", "rounds", s.rounds);
  read(doc, "", "step_size", s.step_size);
  read(doc, "", "batch_size", s.batch_size);
  read(doc, "", "refresh_batch", s.refresh_batch);
  read(doc, "", "power", s.channel.power);
  double value = 0.0;
  if (read(doc, "", "snr_db", value)) s.channel.snr_db = value;
  if (read(doc, "", "noise_var", value)) s.channel.noise_var = value;
  if (s.channel.snr_db && s.channel.noise_var)
    bad("snr_db", "set exactly one of snr_db and noise_var");
  if (!s.channel.snr_db && !s.channel.noise_var) s.channel.snr_db = 10.0;
  if (doc.contains("fading")) parse_fading(doc.at("fading"), s.channel.fading);
  read(doc, "", "h_min", s.channel.h_min);
  read(doc, "", "rho_min", s.channel.rho_min);
  read(doc, "", "participants", s.participants);
  read(doc, "", "refresh_at_local", s.refresh_at_local);
  read(doc, "", "init_std", s.init_std);
  read(doc, "", "weighted_output", cfg.weighted_output);
  read(doc, "", "trials", cfg.trials);
  read(doc, "", "seed", cfg.seed);
  read(doc, "", "workers", cfg.workers);
  if (doc.contains("calibration")) {
    const json& c = doc.at("calibration");
    check_keys(c, "calibration", {"frac", "trials", "reuse_path"});
    read(c, "calibration", "frac", cfg.calibration.frac);
    read(c, "calibration", "trials", cfg.calibration.trials);
    read(c, "calibration", "reuse_path", cfg.calibration.reuse_path);
  }
  read(doc, "", "output_dir", cfg.output_dir);
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorCode::kConfig, "cannot read config file " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_text(ss.str());
  } catch (const Error& e) {
    fail(e.code(), file + ": " + e.what());
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json task;
  if (cfg.task.source == TaskSource::kSynthetic) {
    const auto& s = cfg.task.synthetic;
    task = {{"kind", "synthetic"},
            {"num_users", s.num_users},
            {"samples_per_user", s.samples_per_user},
            {"dim", s.dim},
            {"feature_het", s.feature_het},
            {"model_het", s.model_het},
            {"label_noise_std", s.label_noise_std}};
  } else {
    task = {{"kind", "mnist"},
            {"num_users", cfg.task.num_users},
            {"samples_per_user", cfg.task.samples_per_user},
            {"data_dir", cfg.task.data_dir},
            {"partition", cfg.task.partition == Partition::kBalanced
                              ? "balanced"
                              : "imbalanced"},
            {"skew_frac", cfg.task.skew_frac},
            {"l2", cfg.task.l2}};
  }
  json algs = json::array();
  for (auto a : cfg.algorithms) algs.push_back(orchestrator::algorithm_name(a));
  const auto& s = cfg.settings;
  json doc = {{"name", cfg.name},
              {"title", cfg.title},
              {"task", task},
              {"algorithms", algs},
              {"local_steps", s.local_steps},
              {"rounds", s.rounds},
              {"step_size", s.step_size},
              {"batch_size", s.batch_size},
              {"refresh_batch", s.refresh_batch},
              {"power", s.channel.power},
              {"fading",
               {{"family", family_name(s.channel.fading.family)},
                {"scale", s.channel.fading.scale},
                {"lo", s.channel.fading.lo},
                {"hi", s.channel.fading.hi}}},
              {"h_min", s.channel.h_min},
              {"rho_min", s.channel.rho_min},
              {"participants", s.participants},
              {"refresh_at_local", s.refresh_at_local},
              {"init_std", s.init_std},
              {"weighted_output", cfg.weighted_output},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"workers", cfg.workers},
              {"calibration",
               {{"frac", cfg.calibration.frac},
                {"trials", cfg.calibration.trials},
                {"reuse_path", cfg.calibration.reuse_path}}},
              {"output_dir", cfg.output_dir}};
  if (s.channel.snr_db)
    doc["snr_db"] = *s.channel.snr_db;
  else
    doc["noise_var"] = *s.channel.noise_var;
  return doc;
}

std::string config_hash(const ExperimentConfig& cfg) {
  json doc = config_to_json(cfg);
  doc.erase("workers");
  doc.erase("output_dir");
  doc.erase("title");
  doc["calibration"].erase("reuse_path");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, hash_string(doc.dump()));
  return buf;
}

std::string resolve_data_dir(const TaskSpec& task) {
  if (!task.data_dir.empty()) return task.data_dir;
  if (const char* env = std::getenv("OTAFL_DATA_DIR"); env && *env) return env;
  fail(ErrorCode::kIo,
       "MNIST directory not configured: set task.data_dir or OTAFL_DATA_DIR");
}

}  // namespace otafl::harness
