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

#include "boxgen/dataset/annotations.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "boxgen/base/error.h"

namespace boxgen {
namespace {

namespace fs = std::filesystem;

bool IsCar(std::string category) {
  std::transform(category.begin(), category.end(), category.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return category == "car";
}

double Coordinate(const nlohmann::json& box2d, const char* key,
                  const std::string& image_id, size_t label) {
  if (!box2d.contains(key) || !box2d[key].is_number()) {
    Fail(ErrorCode::kInvalidArgument,
         "image '{}': label {} box2d.{} is missing or not a number", image_id,
         label, key);
  }
  const double v = box2d[key].get<double>();
  if (!std::isfinite(v)) {
    Fail(ErrorCode::kInvalidArgument, "image '{}': label {} box2d.{} is not finite",
         image_id, label, key);
  }
  return v;
}

}  // namespace

std::vector<SceneRecord> ParseAnnotations(const nlohmann::json& root,
                                          const std::string& base_dir,
                                          bool check_files) {
  if (!root.is_array()) {
    Fail(ErrorCode::kInvalidArgument, "annotation root must be a JSON array");
  }
  std::vector<SceneRecord> out;
  for (size_t i = 0; i < root.size(); ++i) {
    const nlohmann::json& rec = root[i];
    if (!rec.is_object()) {
      Fail(ErrorCode::kInvalidArgument, "record {} is not an object", i);
    }
    std::string image;
    if (rec.contains("image") && rec["image"].is_string()) {
      image = rec["image"].get<std::string>();
    } else if (rec.contains("name") && rec["name"].is_string()) {
      image = rec["name"].get<std::string>();
    } else {
      Fail(ErrorCode::kInvalidArgument, "record {}: field 'image' missing or not a string",
           i);
    }
    SceneRecord scene;
    scene.image_id = fs::path(image).stem().string();
    fs::path p(image);
    scene.image_path = p.is_absolute() ? p.string() : (fs::path(base_dir) / p).string();
    if (rec.contains("labels") && !rec["labels"].is_null()) {
      const nlohmann::json& labels = rec["labels"];
      if (!labels.is_array()) {
        Fail(ErrorCode::kInvalidArgument, "image '{}': field 'labels' is not an array",
             scene.image_id);
      }
      for (size_t k = 0; k < labels.size(); ++k) {
        const nlohmann::json& label = labels[k];
        if (!label.contains("category") || !label["category"].is_string()) {
          Fail(ErrorCode::kInvalidArgument,
               "image '{}': label {} field 'category' missing or not a string",
               scene.image_id, k);
        }
        if (!IsCar(label["category"].get<std::string>())) continue;
        if (!label.contains("box2d")) continue;
        const nlohmann::json& b = label["box2d"];
        if (!b.is_object()) {
          Fail(ErrorCode::kInvalidArgument, "image '{}': label {} box2d is not an object",
               scene.image_id, k);
        }
        SourceBox box{Coordinate(b, "x1", scene.image_id, k),
                      Coordinate(b, "y1", scene.image_id, k),
                      Coordinate(b, "x2", scene.image_id, k),
                      Coordinate(b, "y2", scene.image_id, k)};
        if (box.x2 < box.x1) {
          Fail(ErrorCode::kInvalidArgument, "image '{}': label {} box2d has x2 ({}) < x1 ({})",
               scene.image_id, k, box.x2, box.x1);
        }
        if (box.y2 < box.y1) {
          Fail(ErrorCode::kInvalidArgument, "image '{}': label {} box2d has y2 ({}) < y1 ({})",
               scene.image_id, k, box.y2, box.y1);
        }
        scene.boxes.push_back(box);
      }
    }
    if (check_files && !fs::exists(scene.image_path)) {
      Fail(ErrorCode::kNotFound, "image '{}' not found at {}", scene.image_id,
           scene.image_path);
    }
    out.push_back(std::move(scene));
  }
  return out;
}

std::vector<SceneRecord> LoadAnnotations(const std::string& path, bool check_files,
                                         const std::string& image_dir) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kNotFound, "annotation file not found: {}", path);
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInvalidArgument, "annotation file {} is not valid JSON: {}", path,
         e.what());
  }
  const std::string base = image_dir.empty() ? fs::path(path).parent_path().string() : image_dir;
  return ParseAnnotations(root, base, check_files);
}

nlohmann::json ScenesToJson(const std::vector<AnnotatedScene>& scenes,
                            const std::string& image_dir) {
  nlohmann::json out = nlohmann::json::array();
  for (const AnnotatedScene& s : scenes) {
    nlohmann::json labels = nlohmann::json::array();
    for (const Box& b : s.boxes) {
      labels.push_back({{"category", "car"},
                        {"box2d",
                         {{"x1", b.x}, {"y1", b.y}, {"x2", b.x + b.w}, {"y2", b.y + b.h}}}});
    }
    out.push_back({{"image", (fs::path(image_dir) / (s.image_id + ".png")).string()},
                   {"source_height", s.source_height},
                   {"source_width", s.source_width},
                   {"labels", labels}});
  }
  return out;
}

}  // namespace boxgen
