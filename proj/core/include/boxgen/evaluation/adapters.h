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

#ifndef BOXGEN_EVALUATION_ADAPTERS_H_
#define BOXGEN_EVALUATION_ADAPTERS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "boxgen/evaluation/fid.h"
#include "boxgen/evaluation/matching.h"
#include "boxgen/imaging/image.h"

namespace boxgen {

// Maps RGB patches of input_size() x input_size() to pooled feature rows.
class FeatureExtractor {
 public:
  virtual ~FeatureExtractor() = default;
  virtual std::string id() const = 0;
  virtual int input_size() const = 0;
  virtual int dim() const = 0;
  // One row per patch.
  virtual Eigen::MatrixXd Extract(const std::vector<Image>& patches) const = 0;
};

// Flattens the patch and multiplies by a fixed Gaussian matrix scaled by
// 1/sqrt(input length). Deterministic in `seed`.
class RandomProjectionExtractor : public FeatureExtractor {
 public:
  explicit RandomProjectionExtractor(int input_size = 32, int dim = 64, uint64_t seed = 0);

  std::string id() const override;
  int input_size() const override { return input_size_; }
  int dim() const override { return static_cast<int>(projection_.rows()); }
  Eigen::MatrixXd Extract(const std::vector<Image>& patches) const override;

 private:
  int input_size_;
  uint64_t seed_;
  Eigen::MatrixXd projection_;
};

// Runs `command LIST OUT`: LIST names one PNG per line, the tool writes
// {"features": [[...], ...]} to OUT with one row per listed file.
class SubprocessExtractor : public FeatureExtractor {
 public:
  SubprocessExtractor(std::string command, std::string id, int input_size, int dim);

  std::string id() const override { return id_; }
  int input_size() const override { return input_size_; }
  int dim() const override { return dim_; }
  Eigen::MatrixXd Extract(const std::vector<Image>& patches) const override;

 private:
  std::string command_;
  std::string id_;
  int input_size_;
  int dim_;
};

class Detector {
 public:
  virtual ~Detector() = default;
  virtual std::string id() const = 0;
  // One detection list per image; `ids` name the images in errors.
  virtual std::vector<std::vector<Detection>> Detect(const std::vector<Image>& images,
                                                     const std::vector<std::string>& ids) const = 0;
};

// Reports the known boxes of each image id at confidence 1. Used to check
// the recall harness end to end.
class GroundTruthEchoDetector : public Detector {
 public:
  explicit GroundTruthEchoDetector(std::map<std::string, std::vector<Box>> boxes);

  std::string id() const override { return "ground-truth-echo"; }
  std::vector<std::vector<Detection>> Detect(const std::vector<Image>& images,
                                             const std::vector<std::string>& ids) const override;

 private:
  std::map<std::string, std::vector<Box>> boxes_;
};

// Runs `command LIST OUT`: LIST names one PNG per line, the tool writes an
// object keyed by file stem to OUT, each value a list of
// {"box": [x, y, w, h], "confidence": c, "class": "car"}.
class SubprocessDetector : public Detector {
 public:
  explicit SubprocessDetector(std::string command);

  std::string id() const override { return "subprocess:" + command_; }
  std::vector<std::vector<Detection>> Detect(const std::vector<Image>& images,
                                             const std::vector<std::string>& ids) const override;

 private:
  std::string command_;
};

// Parses one detection object; throws kAdapter on malformed input.
Detection ParseDetection(const nlohmann::json& j);

// Crops each box (no context), resizes it bilinearly to the extractor's
// input size and records the extractor's features. Patches go to the
// extractor in chunks; a failure is rethrown as kAdapter naming the ids of
// the failing chunk.
FeatureSet ExtractPatchFeatures(const std::vector<Image>& images,
                                const std::vector<Box>& boxes,
                                const std::vector<std::string>& ids,
                                const FeatureExtractor& extractor);

}  // namespace boxgen

#endif  // BOXGEN_EVALUATION_ADAPTERS_H_
