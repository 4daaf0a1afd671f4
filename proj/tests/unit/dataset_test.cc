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


#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "boxgen/base/error.h"
#include "boxgen/dataset/annotations.h"
#include "boxgen/dataset/prepare.h"
#include "boxgen/dataset/samples.h"
#include "boxgen/imaging/color.h"
#include "boxgen/imaging/image_io.h"
#include "test_util.h"

namespace boxgen {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

TEST(SizeFilter, MatchesBruteForce) {
  const SizeBounds b;
  int kept = 0;
  for (int w = 1; w <= 80; ++w) {
    for (int h = 1; h <= 60; ++h) {
      const bool want = w >= 10 && w <= 64 && h >= 10 && h <= 50;
      ASSERT_EQ(PassesSizeFilter(w, h), want) << w << "x" << h;
      kept += want;
      if (!want) {
        try {
          CheckSizeFilter({0, 0, w, h});
          FAIL();
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::kSizeFilter);
        }
      }
    }
  }
  EXPECT_EQ(kept, 55 * 41);
  EXPECT_TRUE(PassesSizeFilter(10, 10, b));
  EXPECT_TRUE(PassesSizeFilter(64, 50, b));
  EXPECT_FALSE(PassesSizeFilter(9, 10, b));
  EXPECT_FALSE(PassesSizeFilter(65, 50, b));
}

TEST(SizeFilter, ErrorNamesTheBound) {
  try {
    CheckSizeFilter({0, 0, 70, 20});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("w <= 64"), std::string::npos) << e.what();
  }
}

TEST(ScaleBox, QuarterScaleExamples) {
  // 1280x720 -> 320x180 multiplies coordinates by 0.25.
  EXPECT_EQ(*ScaleBox({100, 200, 300, 400}, 720, 1280, 180, 320), (Box{25, 50, 50, 50}));
  EXPECT_EQ(*ScaleBox({0, 0, 1280, 720}, 720, 1280, 180, 320), (Box{0, 0, 320, 180}));
  // Half-up rounding: 2 * 0.25 = 0.5 -> 1, 9 * 0.25 = 2.25 -> 2.
  EXPECT_EQ(*ScaleBox({2, 2, 9, 9}, 720, 1280, 180, 320), (Box{1, 1, 1, 1}));
  EXPECT_FALSE(ScaleBox({4, 4, 5, 5}, 720, 1280, 180, 320).has_value());
  // Boxes past the border are clamped.
  EXPECT_EQ(*ScaleBox({1200, 700, 1400, 800}, 720, 1280, 180, 320), (Box{300, 175, 20, 5}));
}

TEST(ScaleBox, RandomBoxesStayInside) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-50, 1330), uy(-50, 770);
  for (int i = 0; i < 5000; ++i) {
    double x1 = ux(rng), x2 = ux(rng), y1 = uy(rng), y2 = uy(rng);
    if (x2 < x1) std::swap(x1, x2);
    if (y2 < y1) std::swap(y1, y2);
    const auto b = ScaleBox({x1, y1, x2, y2}, 720, 1280, 180, 320);
    if (b) ASSERT_TRUE(b->FitsIn(180, 320));
  }
}

TEST(Annotations, ParsesCarsOnly) {
  const json root = json::parse(R"([
    {"name": "a.jpg", "labels": [
      {"category": "car", "box2d": {"x1": 1, "y1": 2, "x2": 30, "y2": 40}},
      {"category": "Car", "box2d": {"x1": 5, "y1": 5, "x2": 6, "y2": 7}},
      {"category": "person", "box2d": {"x1": 0, "y1": 0, "x2": 3, "y2": 3}},
      {"category": "lane", "poly2d": []}
    ]},
    {"image": "sub/b.png", "labels": null}
  ])");
  const auto recs = ParseAnnotations(root, "/data", false);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].image_id, "a");
  EXPECT_EQ(recs[0].image_path, "/data/a.jpg");
  ASSERT_EQ(recs[0].boxes.size(), 2u);
  EXPECT_EQ(recs[0].boxes[0], (SourceBox{1, 2, 30, 40}));
  EXPECT_EQ(recs[1].image_id, "b");
  EXPECT_TRUE(recs[1].boxes.empty());
}

TEST(Annotations, MalformedRecordsFail) {
  for (const char* bad : {
           R"({"name": "a.jpg"})",
           R"([{"labels": []}])",
           R"([{"name": "a.jpg", "labels": [{"box2d": {"x1": 0, "y1": 0, "x2": 1, "y2": 1}}]}])",
           R"([{"name": "a.jpg", "labels": [{"category": "car", "box2d": {"x1": 0, "y1": 0, "x2": 1}}]}])",
           R"([{"name": "a.jpg", "labels": [{"category": "car", "box2d": {"x1": 5, "y1": 0, "x2": 1, "y2": 3}}]}])",
       }) {
    try {
      ParseAnnotations(json::parse(bad), ".", false);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument) << bad;
    }
  }
  try {
    ParseAnnotations(json::parse(R"([{"name": "missing.jpg"}])"), "/nope", true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

class PrepareTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(5);
    fs::create_directories(dir_.path() / "raw");
    WritePng(dir_ / "raw/one.png", testing::RandomImage8(3, 72, 128, rng));
    WritePng(dir_ / "raw/two.png", testing::RandomImage8(3, 72, 128, rng));
    WriteFile(dir_ / "raw/broken.jpg", "not a jpeg");
    // Boxes at 128 -> 320 (x2.5): 10x8 -> 25x20 kept, 2x2 -> 5x5 filtered,
    // 0.1-wide -> degenerate.
    WriteFile(dir_ / "labels.json", R"([
      {"name": "one.png", "labels": [
        {"category": "car", "box2d": {"x1": 10, "y1": 10, "x2": 20, "y2": 18}},
        {"category": "car", "box2d": {"x1": 50, "y1": 30, "x2": 52, "y2": 32}},
        {"category": "car", "box2d": {"x1": 60, "y1": 30, "x2": 60.1, "y2": 40}}]},
      {"name": "two.png", "labels": [
        {"category": "car", "box2d": {"x1": 0, "y1": 0, "x2": 24, "y2": 16}}]},
      {"name": "broken.jpg", "labels": []}
    ])");
  }

  testing::TempDir dir_;
};

TEST_F(PrepareTest, WritesFilteredDatasetAndReportsBadImages) {
  const PrepareReport report =
      PrepareDataset(dir_ / "labels.json", dir_ / "out", {}, dir_ / "raw");
  ASSERT_EQ(report.errors.size(), 1u);
  EXPECT_NE(report.errors[0].find("broken.jpg"), std::string::npos);
  EXPECT_EQ(report.stats.n_scenes, 2);
  EXPECT_EQ(report.stats.n_boxes_total, 4);
  EXPECT_EQ(report.stats.n_boxes_degenerate, 1);
  EXPECT_EQ(report.stats.n_boxes_kept, 2);

  const Dataset ds = LoadPreparedDataset(dir_ / "out");
  ASSERT_EQ(ds.scenes.size(), 2u);
  EXPECT_EQ(ds.scenes[0].image.height(), 180);
  EXPECT_EQ(ds.scenes[0].image.width(), 320);
  EXPECT_EQ(ds.scenes[0].boxes, (std::vector<Box>{{25, 25, 25, 20}}));
  EXPECT_EQ(ds.scenes[1].boxes, (std::vector<Box>{{0, 0, 60, 40}}));
  EXPECT_EQ(ds.stats.n_boxes_kept, 2);
  // Stats describe the PNGs on disk.
  EXPECT_NEAR(ds.stats.mean_gray, MeanGray(ds.scenes), 1e-9);
}

TEST_F(PrepareTest, IsIdempotent) {
  PrepareDataset(dir_ / "labels.json", dir_ / "out", {}, dir_ / "raw");
  const std::string ann = ReadFile(dir_ / "out/annotations.json");
  const std::string stats = ReadFile(dir_ / "out/stats.json");
  const std::string png = ReadFile(dir_ / "out/images/one.png");
  PrepareDataset(dir_ / "labels.json", dir_ / "out", {}, dir_ / "raw");
  EXPECT_EQ(ReadFile(dir_ / "out/annotations.json"), ann);
  EXPECT_EQ(ReadFile(dir_ / "out/stats.json"), stats);
  EXPECT_EQ(ReadFile(dir_ / "out/images/one.png"), png);
}

TEST_F(PrepareTest, CustomBoundsKeepSmallBoxes) {
  const PrepareReport report =
      PrepareDataset(dir_ / "labels.json", dir_ / "out", {1, 1, 500, 500}, dir_ / "raw");
  EXPECT_EQ(report.stats.n_boxes_kept, 3);
}

TEST(Samples, MaskedInputLayout) {
  const auto scenes = SyntheticScenes(2, 40, 64, 1);
  const AnnotatedScene& s = scenes[0];
  const Box b = s.boxes.front();
  const TrainingSample t = MakeSample(s, b, 0.3f);
  EXPECT_EQ(t.masked_input.channels(), 2);
  const Image gray = RgbToGray(s.image);
  EXPECT_TRUE(BitEqual(t.gray_target, gray));
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 64; ++x) {
      const bool in = b.Contains(x, y);
      ASSERT_EQ(t.masked_input.at(1, y, x), in ? 1.0f : 0.0f);
      ASSERT_EQ(t.masked_input.at(0, y, x), in ? 0.3f : gray.at(0, y, x));
    }
  }
  EXPECT_EQ(t.fill, 0.3f);
  size_t total = 0;
  for (const auto& sc : scenes) total += sc.boxes.size();
  EXPECT_EQ(MakeSamples(scenes, 0.5f).size(), total);
}

TEST(Samples, SyntheticScenesAreDeterministicAndValid) {
  const auto a = SyntheticScenes(6, 90, 160, 9);
  const auto b = SyntheticScenes(6, 90, 160, 9);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(BitEqual(a[i].image, b[i].image));
    EXPECT_EQ(a[i].boxes, b[i].boxes);
    EXPECT_FALSE(a[i].boxes.empty());
    for (const Box& box : a[i].boxes) {
      EXPECT_TRUE(box.FitsIn(90, 160));
      EXPECT_TRUE(PassesSizeFilter(box.w, box.h));
    }
    EXPECT_GE(a[i].image.MinValue(), 0.0f);
    EXPECT_LE(a[i].image.MaxValue(), 1.0f);
  }
}

TEST(BatchStream, EpochsArePermutations) {
  BatchStream s(10, 4, 7);
  for (int epoch = 0; epoch < 3; ++epoch) {
    std::multiset<size_t> seen;
    for (int k = 0; k < 3; ++k) {
      const auto batch = s.Next();
      EXPECT_EQ(batch.size(), k < 2 ? 4u : 2u);
      seen.insert(batch.begin(), batch.end());
    }
    EXPECT_EQ(seen, (std::multiset<size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
  }
  EXPECT_EQ(s.epoch(), 3);
}

TEST(BatchStream, SeedDeterminesOrder) {
  BatchStream a(50, 8, 1), b(50, 8, 1), c(50, 8, 2);
  bool differs = false;
  for (int i = 0; i < 20; ++i) {
    const auto x = a.Next();
    EXPECT_EQ(x, b.Next());
    differs = differs || x != c.Next();
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(BatchStream::Epoch(50, 8, 1, 0), BatchStream::Epoch(50, 8, 1, 0));
  EXPECT_THROW(BatchStream(0, 4, 1), Error);
  EXPECT_THROW(BatchStream(3, 0, 1), Error);
}

}  // namespace
}  // namespace boxgen
