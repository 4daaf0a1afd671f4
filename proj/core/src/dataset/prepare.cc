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

#include "boxgen/dataset/prepare.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "boxgen/base/error.h"
#include "boxgen/imaging/color.h"
#include "boxgen/imaging/image_io.h"
#include "boxgen/imaging/transform.h"

namespace boxgen {
namespace {

namespace fs = std::filesystem;

int RoundHalfUp(double v) { return static_cast<int>(std::floor(v + 0.5)); }

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) Fail(ErrorCode::kDataLoss, "cannot write {}", path.string());
}

}  // namespace

nlohmann::json SizeBounds::ToJson() const {
  return {{"min_width", min_width},
          {"min_height", min_height},
          {"max_width", max_width},
          {"max_height", max_height}};
}

bool PassesSizeFilter(int width, int height, const SizeBounds& bounds) {
  return width >= bounds.min_width && height >= bounds.min_height &&
         width <= bounds.max_width && height <= bounds.max_height;
}

void CheckSizeFilter(const Box& box, const SizeBounds& b) {
  if (box.w < b.min_width) {
    Fail(ErrorCode::kSizeFilter, "box {} violates w >= {}", box.ToString(), b.min_width);
  }
  if (box.h < b.min_height) {
    Fail(ErrorCode::kSizeFilter, "box {} violates h >= {}", box.ToString(), b.min_height);
  }
  if (box.w > b.max_width) {
    Fail(ErrorCode::kSizeFilter, "box {} violates w <= {}", box.ToString(), b.max_width);
  }
  if (box.h > b.max_height) {
    Fail(ErrorCode::kSizeFilter, "box {} violates h <= {}", box.ToString(), b.max_height);
  }
}

std::optional<Box> ScaleBox(const SourceBox& box, int source_height, int source_width,
                            int target_height, int target_width) {
  const double sx = static_cast<double>(target_width) / source_width;
  const double sy = static_cast<double>(target_height) / source_height;
  const int x1 = std::clamp(RoundHalfUp(box.x1 * sx), 0, target_width);
  const int x2 = std::clamp(RoundHalfUp(box.x2 * sx), 0, target_width);
  const int y1 = std::clamp(RoundHalfUp(box.y1 * sy), 0, target_height);
  const int y2 = std::clamp(RoundHalfUp(box.y2 * sy), 0, target_height);
  if (x2 <= x1 || y2 <= y1) return std::nullopt;
  return Box{x1, y1, x2 - x1, y2 - y1};
}

AnnotatedScene PrepareScene(const std::string& image_id, const Image& source,
                            const std::vector<SourceBox>& boxes,
                            PrepareCounters* counters, int target_height,
                            int target_width) {
  AnnotatedScene out;
  out.image_id = image_id;
  out.source_height = source.height();
  out.source_width = source.width();
  out.image = ResizeBilinear(source, target_height, target_width);
  for (const SourceBox& b : boxes) {
    if (counters) ++counters->boxes_total;
    auto scaled = ScaleBox(b, source.height(), source.width(), target_height, target_width);
    if (!scaled) {
      if (counters) ++counters->boxes_degenerate;
      continue;
    }
    out.boxes.push_back(*scaled);
  }
  return out;
}

AnnotatedScene FilterBoxes(AnnotatedScene scene, const SizeBounds& bounds) {
  std::erase_if(scene.boxes,
                [&](const Box& b) { return !PassesSizeFilter(b.w, b.h, bounds); });
  return scene;
}

nlohmann::json DatasetStats::ToJson() const {
  return {{"n_scenes", n_scenes},
          {"n_boxes_total", n_boxes_total},
          {"n_boxes_kept", n_boxes_kept},
          {"n_boxes_degenerate", n_boxes_degenerate},
          {"mean_gray", mean_gray}};
}

DatasetStats DatasetStats::FromJson(const nlohmann::json& j) {
  DatasetStats s;
  s.n_scenes = j.at("n_scenes").get<long>();
  s.n_boxes_total = j.at("n_boxes_total").get<long>();
  s.n_boxes_kept = j.at("n_boxes_kept").get<long>();
  s.n_boxes_degenerate = j.value("n_boxes_degenerate", 0L);
  s.mean_gray = j.at("mean_gray").get<double>();
  return s;
}

double MeanGray(const std::vector<AnnotatedScene>& scenes) {
  double total = 0.0;
  size_t count = 0;
  for (const AnnotatedScene& s : scenes) {
    const Image gray = RgbToGray(s.image);
    for (float v : gray.data()) total += v;
    count += gray.plane_size();
  }
  return count == 0 ? 0.5 : total / static_cast<double>(count);
}

PrepareReport PrepareDataset(const std::string& annotations_path,
                             const std::string& out_dir, const SizeBounds& bounds,
                             const std::string& image_dir) {
  const std::vector<SceneRecord> records = LoadAnnotations(annotations_path, false, image_dir);
  const fs::path root(out_dir);
  fs::create_directories(root / "images");
  PrepareReport report;
  PrepareCounters counters;
  std::vector<AnnotatedScene> scenes;
  for (const SceneRecord& rec : records) {
    try {
      const Image source = ReadImage(rec.image_path);
      AnnotatedScene scene = PrepareScene(rec.image_id, source, rec.boxes, &counters);
      scene = FilterBoxes(std::move(scene), bounds);
      WritePng((root / "images" / (scene.image_id + ".png")).string(), scene.image);
      // Later stages read the PNG, so keep the 8-bit values for statistics.
      scene.image = QuantizeTo8Bit(scene.image);
      scenes.push_back(std::move(scene));
    } catch (const Error& e) {
      report.errors.push_back(fmt::format("{}: {}", rec.image_path, e.what()));
    }
  }
  report.stats.n_scenes = static_cast<long>(scenes.size());
  report.stats.n_boxes_total = counters.boxes_total;
  report.stats.n_boxes_degenerate = counters.boxes_degenerate;
  for (const AnnotatedScene& s : scenes) report.stats.n_boxes_kept += static_cast<long>(s.boxes.size());
  report.stats.mean_gray = MeanGray(scenes);
  WriteText(root / "annotations.json", ScenesToJson(scenes, "images").dump(2) + "\n");
  WriteText(root / "stats.json", report.stats.ToJson().dump(2) + "\n");
  return report;
}

Dataset LoadPreparedDataset(const std::string& dir) {
  const fs::path root(dir);
  Dataset out;
  std::ifstream stats_in(root / "stats.json");
  if (!stats_in) Fail(ErrorCode::kNotFound, "missing {}", (root / "stats.json").string());
  try {
    out.stats = DatasetStats::FromJson(nlohmann::json::parse(stats_in));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, "bad stats.json in {}: {}", dir, e.what());
  }
  const std::vector<SceneRecord> records =
      LoadAnnotations((root / "annotations.json").string(), true);
  for (const SceneRecord& rec : records) {
    AnnotatedScene scene;
    scene.image_id = rec.image_id;
    scene.image = ReadImage(rec.image_path);
    scene.source_height = scene.image.height();
    scene.source_width = scene.image.width();
    for (const SourceBox& b : rec.boxes) {
      Box box{static_cast<int>(b.x1), static_cast<int>(b.y1),
              static_cast<int>(b.x2 - b.x1), static_cast<int>(b.y2 - b.y1)};
      CheckBoxInside(box, scene.image.height(), scene.image.width());
      scene.boxes.push_back(box);
    }
    out.scenes.push_back(std::move(scene));
  }
  return out;
}

}  // namespace boxgen
