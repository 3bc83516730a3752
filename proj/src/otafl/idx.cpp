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

#include "otafl/idx.hpp"

#include <zlib.h>

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

namespace otafl::tasks {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

struct GzCloser {
  void operator()(gzFile_s* f) const { gzclose(f); }
};
using GzHandle = std::unique_ptr<gzFile_s, GzCloser>;

GzHandle open(const std::string& path) {
  require(std::filesystem::is_regular_file(path), "cannot open " + path,
          ErrorCode::kIo);
  GzHandle f(gzopen(path.c_str(), "rb"));
  require(f != nullptr, "cannot open " + path, ErrorCode::kIo);
  return f;
}

void read_exact(gzFile_s* f, void* buf, std::size_t n,
                const std::string& path) {
  auto* out = static_cast<unsigned char*>(buf);
  std::size_t got = 0;
  while (got < n) {
    const unsigned chunk =
        static_cast<unsigned>(std::min<std::size_t>(n - got, 1u << 30));
    const int r = gzread(f, out + got, chunk);
    require(r >= 0, "read error in " + path, ErrorCode::kIo);
    if (r == 0) fail(ErrorCode::kTruncated, "truncated IDX file " + path);
    got += static_cast<std::size_t>(r);
  }
}

std::uint32_t read_be32(gzFile_s* f, const std::string& path) {
  std::array<unsigned char, 4> b{};
  read_exact(f, b.data(), b.size(), path);
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

std::string pick(const std::string& dir, const std::string& stem) {
  namespace fs = std::filesystem;
  for (const std::string& name : {stem, stem + ".gz"}) {
    const fs::path p = fs::path(dir) / name;
    if (fs::is_regular_file(p)) return p.string();
  }
  fail(ErrorCode::kIo, "missing MNIST file " + stem + " in " + dir);
}

}  // namespace

UserDataset load_mnist_idx(const std::string& image_path,
                           const std::string& label_path) {
  auto images = open(image_path);
  auto labels = open(label_path);
  require(read_be32(images.get(), image_path) == kImageMagic,
          "bad IDX image magic in " + image_path, ErrorCode::kBadMagic);
  require(read_be32(labels.get(), label_path) == kLabelMagic,
          "bad IDX label magic in " + label_path, ErrorCode::kBadMagic);
  const std::uint32_t count = read_be32(images.get(), image_path);
  const std::uint32_t rows = read_be32(images.get(), image_path);
  const std::uint32_t cols = read_be32(images.get(), image_path);
  const std::uint32_t label_count = read_be32(labels.get(), label_path);
  require(count == label_count,
          "image count " + std::to_string(count) + " differs from label count " +
              std::to_string(label_count),
          ErrorCode::kCountMismatch);

  const std::size_t pixels = std::size_t{rows} * cols;
  UserDataset out;
  out.features.resize(count, static_cast<Eigen::Index>(pixels));
  out.labels.resize(count);
  std::vector<unsigned char> buf(pixels);
  for (std::uint32_t n = 0; n < count; ++n) {
    read_exact(images.get(), buf.data(), buf.size(), image_path);
    for (std::size_t m = 0; m < pixels; ++m)
      out.features(n, static_cast<Eigen::Index>(m)) = buf[m] / 255.0;
  }
  std::vector<unsigned char> lab(count);
  if (count > 0) read_exact(labels.get(), lab.data(), lab.size(), label_path);
  for (std::uint32_t n = 0; n < count; ++n) {
    require(lab[n] <= 9, "label outside 0..9 in " + label_path,
            ErrorCode::kInvalidArgument);
    out.labels[n] = lab[n];
  }
  return out;
}

UserDataset load_mnist_dir(const std::string& dir, bool train) {
  const std::string prefix = train ? "train" : "t10k";
  return load_mnist_idx(pick(dir, prefix + "-images-idx3-ubyte"),
                        pick(dir, prefix + "-labels-idx1-ubyte"));
}

}  // namespace otafl::tasks
