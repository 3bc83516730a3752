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

#ifndef OTAFL_IDX_HPP_
#define OTAFL_IDX_HPP_

#include <string>

#include "otafl/tasks.hpp"

namespace otafl::tasks {

// Reads an IDX image/label file pair, plain or gzip-compressed. Pixels are
// scaled to [0, 1].
UserDataset load_mnist_idx(const std::string& image_path,
                           const std::string& label_path);

// Looks for the standard file names (with or without .gz) in a directory.
UserDataset load_mnist_dir(const std::string& dir, bool train);

}  // namespace otafl::tasks

#endif  // OTAFL_IDX_HPP_
