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

#ifndef OTAFL_HARNESS_PRESETS_HPP_
#define OTAFL_HARNESS_PRESETS_HPP_

#include <string>
#include <vector>

#include "otafl/harness/config.hpp"

namespace otafl::harness {

std::vector<std::string> preset_names();

// Pinned desk-scale figure configurations; full_scale raises the trial count.
ExperimentConfig preset(const std::string& name, bool full_scale = false);

}  // namespace otafl::harness

#endif  // OTAFL_HARNESS_PRESETS_HPP_
