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
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <utility>

#include <gtest/gtest.h>

#include "boxgen/base/error.h"
#include "boxgen/codec/color_codec.h"
#include "boxgen/imaging/color.h"
#include "test_util.h"

namespace boxgen {
namespace {

using Cell = std::pair<int, int>;  // (a, b) centre coordinates

// Independent sweep: every 8-bit colour through the reference Lab formulas;
// a 10-unit cell survives when its centre lies within 10*sqrt(2) of one.
std::set<Cell> OracleCells() {
  std::set<Cell> keep;
  bool grid[22][22] = {};
  for (int r = 0; r < 256; r += 1) {
    for (int g = 0; g < 256; ++g) {
      for (int b = 0; b < 256; ++b) {
        const auto lab = testing::OracleLab(r / 255.0, g / 255.0, b / 255.0);
        const int ci = static_cast<int>(std::floor((lab[1] + 110) / 10));
        const int cj = static_cast<int>(std::floor((lab[2] + 110) / 10));
        for (int i = std::max(ci - 2, 0); i <= std::min(ci + 2, 21); ++i) {
          for (int j = std::max(cj - 2, 0); j <= std::min(cj + 2, 21); ++j) {
            if (grid[i][j]) continue;
            const double da = -105 + 10 * i - lab[1], db = -105 + 10 * j - lab[2];
            if (da * da + db * db <= 200.0) grid[i][j] = true;
          }
        }
      }
    }
  }
  for (int i = 0; i < 22; ++i) {
    for (int j = 0; j < 22; ++j) {
      if (grid[i][j]) keep.insert({-105 + 10 * i, -105 + 10 * j});
    }
  }
  return keep;
}

std::set<Cell> CellsOf(const ColorBinCodec& codec) {
  std::set<Cell> out;
  for (const AbPair& c : codec.centers()) {
    out.insert({static_cast<int>(std::lround(c.a)), static_cast<int>(std::lround(c.b))});
  }
  return out;
}

TEST(Codec, FixtureHasThreeHundredThirteenBins) {
  const ColorBinCodec& codec = DefaultCodec();
  EXPECT_EQ(codec.count(), 313);
  EXPECT_EQ(CellsOf(codec).size(), 313u);
}

TEST(Codec, FixtureMatchesIndependentSweep) {
  const std::set<Cell> oracle = OracleCells();
  EXPECT_EQ(oracle.size(), 313u);
  EXPECT_EQ(CellsOf(DefaultCodec()), oracle);
}

TEST(Codec, LibrarySweepMatchesFixture) {
  const ColorBinCodec swept = ColorBinCodec::FromGamutSweep();
  EXPECT_EQ(swept.centers(), DefaultCodec().centers());
}

TEST(Codec, EncodeMatchesLinearScan) {
  const ColorBinCodec& codec = DefaultCodec();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 10000; ++t) {
    const Lab lab = SrgbToLab(u(rng), u(rng), u(rng));
    int best = 0;
    double best_d = 1e300;
    for (int k = 0; k < codec.count(); ++k) {
      const double da = codec.center(k).a - lab.a, db = codec.center(k).b - lab.b;
      if (da * da + db * db < best_d) {
        best_d = da * da + db * db;
        best = k;
      }
    }
    ASSERT_EQ(codec.Encode(lab.a, lab.b), best);
    // The own cell's centre is always kept, so the error is half a diagonal.
    ASSERT_LE(std::sqrt(best_d), 5.0 * std::sqrt(2.0) + 1e-9);
  }
}

TEST(Codec, EncodeFarOutsideFallsBackToNearest) {
  const ColorBinCodec& codec = DefaultCodec();
  const int id = codec.Encode(500.0, 500.0);
  for (int k = 0; k < codec.count(); ++k) {
    const auto d = [&](int i) {
      return std::hypot(codec.center(i).a - 500.0, codec.center(i).b - 500.0);
    };
    EXPECT_LE(d(id), d(k));
  }
}

TEST(Codec, CentresEncodeToThemselves) {
  const ColorBinCodec& codec = DefaultCodec();
  for (int k = 0; k < codec.count(); ++k) {
    EXPECT_EQ(codec.Encode(codec.center(k).a, codec.center(k).b), k);
  }
}

TEST(Codec, DecodeOneHotAndTies) {
  const ColorBinCodec& codec = DefaultCodec();
  Image dist(313, 1, 2, 0.0f);
  dist.at(17, 0, 0) = 1.0f;
  dist.at(40, 0, 1) = 0.5f;
  dist.at(30, 0, 1) = 0.5f;
  const Image ab = codec.Decode(dist);
  EXPECT_EQ(ab.at(0, 0, 0), codec.center(17).a);
  EXPECT_EQ(ab.at(1, 0, 0), codec.center(17).b);
  EXPECT_EQ(ab.at(0, 0, 1), codec.center(30).a);
  const Image mean = codec.DecodeExpected(dist);
  EXPECT_NEAR(mean.at(0, 0, 1), 0.5 * (codec.center(30).a + codec.center(40).a), 1e-4);
  EXPECT_THROW(codec.Decode(Image(10, 1, 1)), Error);
}

TEST(Codec, CeTargetAreaAveragesFirst) {
  const ColorBinCodec& codec = DefaultCodec();
  Image lab(3, 2, 2, 50.0f);
  for (int y = 0; y < 2; ++y) {
    lab.at(1, y, 0) = 10.0f;
    lab.at(1, y, 1) = 30.0f;
    lab.at(2, y, 0) = lab.at(2, y, 1) = -20.0f;
  }
  const ColorClassMap t = codec.CeTarget(lab, 1, 1);
  EXPECT_EQ(t.at(0, 0), codec.Encode(20.0, -20.0));
}

TEST(Codec, SoftTargetIsADistribution) {
  const ColorBinCodec& codec = DefaultCodec();
  std::mt19937_64 rng(3);
  const Image lab = RgbToLab(testing::RandomImage(3, 6, 6, rng));
  const Image soft = codec.SoftTarget(lab, 3, 3);
  EXPECT_NO_THROW(CheckDistribution(soft));
  const ColorClassMap hard = codec.CeTarget(lab, 3, 3);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) {
      float best = -1;
      int arg = -1;
      for (int k = 0; k < 313; ++k) {
        if (soft.at(k, y, x) > best) best = soft.at(k, y, x), arg = k;
      }
      EXPECT_EQ(arg, hard.at(y, x));
    }
  }
}

TEST(Codec, SaveLoadRoundTripAndCorruption) {
  testing::TempDir dir;
  DefaultCodec().Save(dir / "bins.txt");
  EXPECT_EQ(ColorBinCodec::Load(dir / "bins.txt").centers(), DefaultCodec().centers());
  {
    std::ofstream out(dir / "bad.txt");
    out << "# boxgen ab-bins v1\n313\n5 5\n";
  }
  try {
    ColorBinCodec::Load(dir / "bad.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDataLoss);
  }
  auto centers = DefaultCodec().centers();
  centers[1] = centers[0];
  EXPECT_THROW(ColorBinCodec::FromCenters(centers), Error);
  EXPECT_THROW(ColorBinCodec::Load(dir / "missing.txt"), Error);
}

}  // namespace
}  // namespace boxgen
