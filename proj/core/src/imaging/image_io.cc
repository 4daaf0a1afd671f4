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

#include "boxgen/imaging/image_io.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "boxgen/base/error.h"

namespace boxgen {
namespace {

Image FromMat(const cv::Mat& bgr) {
  Image out(3, bgr.rows, bgr.cols);
  for (int y = 0; y < bgr.rows; ++y) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      out.at(0, y, x) = row[x][2] / 255.0f;
      out.at(1, y, x) = row[x][1] / 255.0f;
      out.at(2, y, x) = row[x][0] / 255.0f;
    }
  }
  return out;
}

uint8_t ToByte(float v) {
  return static_cast<uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

cv::Mat ToMat(const Image& image) {
  if (image.channels() == 1) {
    cv::Mat m(image.height(), image.width(), CV_8UC1);
    for (int y = 0; y < image.height(); ++y) {
      uint8_t* row = m.ptr<uint8_t>(y);
      for (int x = 0; x < image.width(); ++x) row[x] = ToByte(image.at(0, y, x));
    }
    return m;
  }
  if (image.channels() != 3) {
    Fail(ErrorCode::kInvalidArgument, "PNG output needs 1 or 3 channels, got {}",
         image.channels());
  }
  cv::Mat m(image.height(), image.width(), CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    cv::Vec3b* row = m.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width(); ++x) {
      row[x] = cv::Vec3b(ToByte(image.at(2, y, x)), ToByte(image.at(1, y, x)),
                         ToByte(image.at(0, y, x)));
    }
  }
  return m;
}

}  // namespace

Image ReadImage(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    Fail(ErrorCode::kNotFound, "image file not found: {}", path);
  }
  cv::Mat bgr = cv::imread(path, cv::IMREAD_COLOR);
  if (bgr.empty()) {
    Fail(ErrorCode::kDataLoss, "cannot decode image: {}", path);
  }
  return FromMat(bgr);
}

Image DecodeImage(std::string_view bytes) {
  std::vector<uint8_t> buffer(bytes.begin(), bytes.end());
  cv::Mat bgr;
  if (!buffer.empty()) bgr = cv::imdecode(buffer, cv::IMREAD_COLOR);
  if (bgr.empty()) {
    Fail(ErrorCode::kDataLoss, "cannot decode image payload ({} bytes)",
         bytes.size());
  }
  return FromMat(bgr);
}

std::string EncodePng(const Image& image) {
  std::vector<uint8_t> buffer;
  const std::vector<int> params = {cv::IMWRITE_PNG_COMPRESSION, 6};
  if (!cv::imencode(".png", ToMat(image), buffer, params)) {
    Fail(ErrorCode::kInternal, "PNG encoding failed");
  }
  return std::string(buffer.begin(), buffer.end());
}

void WritePng(const std::string& path, const Image& image) {
  const std::string bytes = EncodePng(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kNotFound, "cannot open {} for writing", path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kDataLoss, "short write to {}", path);
}

Image QuantizeTo8Bit(const Image& image) {
  Image out = image;
  for (float& v : out.data()) v = ToByte(v) / 255.0f;
  return out;
}

}  // namespace boxgen
