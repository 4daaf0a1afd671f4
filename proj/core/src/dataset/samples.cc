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

#include "boxgen/dataset/samples.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "boxgen/base/error.h"
#include "boxgen/imaging/color.h"
#include "boxgen/imaging/transform.h"

namespace boxgen {

TrainingSample MakeSample(const AnnotatedScene& scene, const Box& box, float fill) {
  const int h = scene.image.height();
  const int w = scene.image.width();
  CheckBoxInside(box, h, w);
  TrainingSample s;
  s.image_id = scene.image_id;
  s.box = box;
  s.fill = fill;
  s.rgb_target = scene.image;
  s.gray_target = RgbToGray(scene.image);
  const BoxMask mask(box, h, w);
  const Image erased = Erase(s.gray_target, mask, fill);
  s.masked_input = Image(2, h, w);
  std::copy(erased.data().begin(), erased.data().end(), s.masked_input.plane(0).begin());
  const Image m = mask.ToImage();
  std::copy(m.data().begin(), m.data().end(), s.masked_input.plane(1).begin());
  return s;
}

std::vector<TrainingSample> MakeSamples(const std::vector<AnnotatedScene>& scenes,
                                        float fill) {
  std::vector<TrainingSample> out;
  for (const AnnotatedScene& scene : scenes) {
    for (const Box& b : scene.boxes) out.push_back(MakeSample(scene, b, fill));
  }
  return out;
}

BatchStream::BatchStream(size_t count, int batch_size, uint64_t seed)
    : count_(count), batch_size_(batch_size), seed_(seed) {
  if (batch_size < 1) {
    Fail(ErrorCode::kInvalidArgument, "batch size must be >= 1, got {}", batch_size);
  }
  if (count == 0) Fail(ErrorCode::kInvalidArgument, "cannot batch an empty dataset");
}

std::vector<size_t> BatchStream::Next() {
  if (next_ == pending_.size()) {
    pending_ = Epoch(count_, batch_size_, seed_, epoch_);
    next_ = 0;
    ++epoch_;
  }
  return pending_[next_++];
}

std::vector<std::vector<size_t>> BatchStream::Epoch(size_t count, int batch_size,
                                                    uint64_t seed, int epoch) {
  std::vector<size_t> order(count);
  for (size_t i = 0; i < count; ++i) order[i] = i;
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(epoch)};
  std::mt19937_64 rng(seq);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<size_t>> batches;
  for (size_t i = 0; i < count; i += batch_size) {
    batches.emplace_back(order.begin() + i,
                         order.begin() + std::min(count, i + batch_size));
  }
  return batches;
}

namespace {

void FillRect(Image& img, int x0, int y0, int x1, int y1, const float rgb[3]) {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, img.width());
  y1 = std::min(y1, img.height());
  for (int c = 0; c < 3; ++c) {
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) img.at(c, y, x) = rgb[c];
    }
  }
}

}  // namespace

std::vector<AnnotatedScene> SyntheticScenes(int count, int height, int width,
                                            uint64_t seed, int max_vehicles) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  auto uniform_int = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  std::vector<AnnotatedScene> out;
  for (int n = 0; n < count; ++n) {
    AnnotatedScene scene;
    scene.image_id = fmt::format("synthetic_{:04d}", n);
    scene.source_height = height;
    scene.source_width = width;
    Image img(3, height, width);
    const int horizon = height * uniform_int(30, 45) / 100;
    const float sky[3] = {0.55f + 0.2f * unit(rng), 0.7f + 0.2f * unit(rng), 0.9f};
    const float road = 0.3f + 0.15f * unit(rng);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        if (y < horizon) {
          const float t = static_cast<float>(y) / std::max(horizon, 1);
          for (int c = 0; c < 3; ++c) img.at(c, y, x) = sky[c] * (1.0f - 0.2f * t);
        } else {
          const float texture = 0.03f * std::sin(0.7f * x + 1.3f * y);
          for (int c = 0; c < 3; ++c) img.at(c, y, x) = road + texture;
        }
      }
    }
    const float lane[3] = {0.9f, 0.9f, 0.85f};
    for (int x = 0; x < width; x += std::max(8, width / 10)) {
      FillRect(img, x, (horizon + height) / 2, x + std::max(2, width / 40),
               (horizon + height) / 2 + std::max(1, height / 60), lane);
    }
    const int vehicles = uniform_int(1, std::max(1, max_vehicles));
    for (int v = 0; v < vehicles; ++v) {
      const int bw = std::clamp(uniform_int(width / 12, width / 5), 10, 64);
      const int bh = std::clamp(bw * uniform_int(55, 85) / 100, 10, 50);
      if (bw > width || bh > height - horizon) continue;
      const int bx = uniform_int(0, width - bw);
      const int by = uniform_int(horizon, height - bh);
      const float body[3] = {unit(rng), unit(rng), unit(rng)};
      const float window[3] = {0.12f, 0.14f, 0.18f};
      const float wheel[3] = {0.05f, 0.05f, 0.05f};
      FillRect(img, bx, by + bh / 4, bx + bw, by + bh - bh / 6, body);
      FillRect(img, bx + bw / 5, by, bx + bw - bw / 5, by + bh / 4, body);
      FillRect(img, bx + bw / 4, by + bh / 16, bx + bw - bw / 4, by + bh / 4, window);
      FillRect(img, bx + bw / 8, by + bh - bh / 6, bx + bw / 3, by + bh, wheel);
      FillRect(img, bx + bw - bw / 3, by + bh - bh / 6, bx + bw - bw / 8, by + bh, wheel);
      scene.boxes.push_back({bx, by, bw, bh});
    }
    for (float& value : img.data()) value = std::clamp(value, 0.0f, 1.0f);
    scene.image = std::move(img);
    out.push_back(std::move(scene));
  }
  return out;
}

}  // namespace boxgen
