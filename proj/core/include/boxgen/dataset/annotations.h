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

#ifndef BOXGEN_DATASET_ANNOTATIONS_H_
#define BOXGEN_DATASET_ANNOTATIONS_H_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boxgen/imaging/box.h"
#include "boxgen/imaging/image.h"

namespace boxgen {

// A box in source-image coordinates as annotated: continuous edges, x2/y2
// exclusive.
struct SourceBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  friend bool operator==(const SourceBox&, const SourceBox&) = default;
};

// One annotated image before preparation.
struct SceneRecord {
  std::string image_id;
  std::string image_path;  // resolved against the annotation file's folder
  std::vector<SourceBox> boxes;  // cars only
};

// A prepared scene: image at the working resolution, integer boxes.
struct AnnotatedScene {
  std::string image_id;
  Image image;
  std::vector<Box> boxes;
  int source_height = 0;
  int source_width = 0;
};

// Annotation schema (BDD-compatible):
//   [ { "image": "relative/or/absolute.png",   // BDD "name" also accepted
//       "labels": [ { "category": "car",
//                     "box2d": {"x1":..,"y1":..,"x2":..,"y2":..} }, ... ] },
//     ... ]
// Only category "car" (case-insensitive) is kept; labels without box2d are
// skipped. Malformed records throw kInvalidArgument naming the image and
// field. With `check_files`, a missing image throws kNotFound with its path.
std::vector<SceneRecord> ParseAnnotations(const nlohmann::json& root,
                                          const std::string& base_dir,
                                          bool check_files = true);
// Image paths resolve against `image_dir`, or the annotation file's
// directory when it is empty.
std::vector<SceneRecord> LoadAnnotations(const std::string& path,
                                         bool check_files = true,
                                         const std::string& image_dir = "");

// Writes prepared scenes back in the same schema (integer edges).
nlohmann::json ScenesToJson(const std::vector<AnnotatedScene>& scenes,
                            const std::string& image_dir);

}  // namespace boxgen

#endif  // BOXGEN_DATASET_ANNOTATIONS_H_
