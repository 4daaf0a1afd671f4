// Copyright 2026 The Boxgen Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "boxgen/evaluation/adapters.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include <fmt/format.h>

#include "boxgen/base/error.h"
#include "boxgen/imaging/image_io.h"
#include "boxgen/imaging/transform.h"

namespace boxgen {
namespace {

namespace fs = std::filesystem;

constexpr size_t kExtractChunk = 32;

// Scratch directory removed on scope exit.
class ScratchDir {
 public:
  ScratchDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            fmt::format("boxgen-{}-{}", static_cast<long>(::getpid()), counter++);
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string Quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

// Writes the images as PNGs, runs the tool and parses its JSON output.
nlohmann::json RunTool(const std::string& command, const std::vector<Image>& images,
                       const std::vector<std::string>& stems) {
  ScratchDir dir;
  const fs::path list = dir.path() / "inputs.txt";
  const fs::path out = dir.path() / "output.json";
  {
    std::ofstream lf(list);
    for (size_t i = 0; i < images.size(); ++i) {
      const fs::path png = dir.path() / (stems[i] + ".png");
      WritePng(png.string(), images[i]);
      lf << png.string() << '\n';
    }
  }
  const std::string cmd = fmt::format("{} {} {}", command, Quote(list.string()), Quote(out.string()));
  const int status = std::system(cmd.c_str());
  if (status != 0) Fail(ErrorCode::kAdapter, "'{}' exited with status {}", command, status);
  std::ifstream in(out);
  if (!in) Fail(ErrorCode::kAdapter, "'{}' wrote no output file", command);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kAdapter, "'{}' wrote invalid JSON: {}", command, e.what());
  }
}

std::string SafeStem(const std::string& id, size_t index) {
  std::string s = fmt::format("{:05d}_", index);
  for (char c : id) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-') ? c : '_';
  return s;
}

}  // namespace

RandomProjectionExtractor::RandomProjectionExtractor(int input_size, int dim, uint64_t seed)
    : input_size_(input_size), seed_(seed) {
  if (input_size < 1 || dim < 1) {
    Fail(ErrorCode::kInvalidArgument, "projection needs positive sizes, got {} and {}",
         input_size, dim);
  }
  const long length = 3L * input_size * input_size;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(length)));
  projection_.resize(dim, length);
  for (long c = 0; c < length; ++c) {
    for (int r = 0; r < dim; ++r) projection_(r, c) = normal(rng);
  }
}

std::string RandomProjectionExtractor::id() const {
  return fmt::format("random-projection-{}x{}-{}-seed{}", input_size_, input_size_, dim(), seed_);
}

Eigen::MatrixXd RandomProjectionExtractor::Extract(const std::vector<Image>& patches) const {
  Eigen::MatrixXd out(static_cast<long>(patches.size()), dim());
  for (size_t i = 0; i < patches.size(); ++i) {
    const Image& p = patches[i];
    if (p.channels() != 3 || p.height() != input_size_ || p.width() != input_size_) {
      Fail(ErrorCode::kShapeMismatch, "projection expects 3x{}x{} patches, got {}x{}x{}",
           input_size_, input_size_, p.channels(), p.height(), p.width());
    }
    Eigen::VectorXd flat(projection_.cols());
    for (long k = 0; k < flat.size(); ++k) flat[k] = p.data()[k];
    out.row(static_cast<long>(i)) = (projection_ * flat).transpose();
  }
  return out;
}

SubprocessExtractor::SubprocessExtractor(std::string command, std::string id, int input_size,
                                         int dim)
    : command_(std::move(command)), id_(std::move(id)), input_size_(input_size), dim_(dim) {
  if (input_size < 1 || dim < 1) {
    Fail(ErrorCode::kInvalidArgument, "extractor needs positive sizes, got {} and {}",
         input_size, dim);
  }
}

Eigen::MatrixXd SubprocessExtractor::Extract(const std::vector<Image>& patches) const {
  std::vector<std::string> stems;
  for (size_t i = 0; i < patches.size(); ++i) stems.push_back(fmt::format("{:05d}", i));
  const nlohmann::json j = RunTool(command_, patches, stems);
  if (!j.contains("features") || !j["features"].is_array() ||
      j["features"].size() != patches.size()) {
    Fail(ErrorCode::kAdapter, "'{}' must return {} feature rows", command_, patches.size());
  }
  Eigen::MatrixXd out(static_cast<long>(patches.size()), dim_);
  for (size_t i = 0; i < patches.size(); ++i) {
    const nlohmann::json& row = j["features"][i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim_) {
      Fail(ErrorCode::kAdapter, "'{}' row {} must hold {} numbers", command_, i, dim_);
    }
    for (int k = 0; k < dim_; ++k) {
      if (!row[k].is_number()) Fail(ErrorCode::kAdapter, "'{}' row {} is not numeric", command_, i);
      out(static_cast<long>(i), k) = row[k].get<double>();
    }
  }
  return out;
}

GroundTruthEchoDetector::GroundTruthEchoDetector(std::map<std::string, std::vector<Box>> boxes)
    : boxes_(std::move(boxes)) {}

std::vector<std::vector<Detection>> GroundTruthEchoDetector::Detect(
    const std::vector<Image>& images, const std::vector<std::string>& ids) const {
  if (images.size() != ids.size()) {
    Fail(ErrorCode::kInvalidArgument, "{} images but {} ids", images.size(), ids.size());
  }
  std::vector<std::vector<Detection>> out;
  for (const std::string& id : ids) {
    auto it = boxes_.find(id);
    if (it == boxes_.end()) Fail(ErrorCode::kAdapter, "no ground truth for image '{}'", id);
    std::vector<Detection> dets;
    for (const Box& b : it->second) dets.push_back({b, 1.0, kVehicleClass});
    out.push_back(std::move(dets));
  }
  return out;
}

Detection ParseDetection(const nlohmann::json& j) {
  try {
    const nlohmann::json& b = j.at("box");
    if (!b.is_array() || b.size() != 4) Fail(ErrorCode::kAdapter, "box must be [x, y, w, h]");
    Detection d;
    d.box = {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
    d.confidence = j.at("confidence").get<double>();
    d.label = j.at("class").get<std::string>();
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      Fail(ErrorCode::kAdapter, "confidence {} outside [0, 1]", d.confidence);
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kAdapter, "malformed detection {}: {}", j.dump(), e.what());
  }
}

SubprocessDetector::SubprocessDetector(std::string command) : command_(std::move(command)) {}

std::vector<std::vector<Detection>> SubprocessDetector::Detect(
    const std::vector<Image>& images, const std::vector<std::string>& ids) const {
  if (images.size() != ids.size()) {
    Fail(ErrorCode::kInvalidArgument, "{} images but {} ids", images.size(), ids.size());
  }
  std::vector<std::string> stems;
  for (size_t i = 0; i < ids.size(); ++i) stems.push_back(SafeStem(ids[i], i));
  const nlohmann::json j = RunTool(command_, images, stems);
  std::vector<std::vector<Detection>> out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (!j.is_object() || !j.contains(stems[i]) || !j[stems[i]].is_array()) {
      Fail(ErrorCode::kAdapter, "detector output lacks a list for image '{}'", ids[i]);
    }
    std::vector<Detection> dets;
    try {
      for (const nlohmann::json& d : j[stems[i]]) dets.push_back(ParseDetection(d));
    } catch (const Error& e) {
      Fail(ErrorCode::kAdapter, "image '{}': {}", ids[i], e.what());
    }
    out.push_back(std::move(dets));
  }
  return out;
}

FeatureSet ExtractPatchFeatures(const std::vector<Image>& images, const std::vector<Box>& boxes,
                                const std::vector<std::string>& ids,
                                const FeatureExtractor& extractor) {
  if (images.size() != boxes.size() || images.size() != ids.size()) {
    Fail(ErrorCode::kInvalidArgument, "{} images, {} boxes and {} ids", images.size(),
         boxes.size(), ids.size());
  }
  FeatureSet set;
  set.extractor_id = extractor.id();
  set.features.resize(static_cast<long>(images.size()), extractor.dim());
  const int size = extractor.input_size();
  for (size_t begin = 0; begin < images.size(); begin += kExtractChunk) {
    const size_t end = std::min(images.size(), begin + kExtractChunk);
    std::vector<Image> patches;
    for (size_t i = begin; i < end; ++i) {
      patches.push_back(ResizeBilinear(CropPatch(images[i], boxes[i]), size, size));
    }
    Eigen::MatrixXd rows;
    try {
      rows = extractor.Extract(patches);
    } catch (const Error& e) {
      Fail(ErrorCode::kAdapter, "feature extraction failed on images '{}'..'{}': {}", ids[begin],
           ids[end - 1], e.what());
    }
    if (rows.rows() != static_cast<long>(patches.size()) || rows.cols() != extractor.dim()) {
      Fail(ErrorCode::kAdapter, "extractor returned {}x{} for images '{}'..'{}', expected {}x{}",
           rows.rows(), rows.cols(), ids[begin], ids[end - 1], patches.size(), extractor.dim());
    }
    set.features.middleRows(static_cast<long>(begin), rows.rows()) = rows;
  }
  return set;
}

}  // namespace boxgen
