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

#ifndef OTAFL_HARNESS_CALIBRATION_IO_HPP_
#define OTAFL_HARNESS_CALIBRATION_IO_HPP_

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"
#include "otafl/orchestrator.hpp"

namespace otafl::harness {

struct CalibrationFile {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::map<orchestrator::AlgorithmKind, orchestrator::Calibration> calibrations;
};

nlohmann::json calibration_to_json(const CalibrationFile& file);
CalibrationFile calibration_from_json(const nlohmann::json& doc);

void write_calibration(const std::string& path, const CalibrationFile& file);
CalibrationFile read_calibration(const std::string& path);

}  // namespace otafl::harness

#endif  // OTAFL_HARNESS_CALIBRATION_IO_HPP_
