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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "boxgen/imaging/image_io.h"
#include "boxgen/networks/checkpoint.h"
#include "test_util.h"

namespace boxgen {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

std::string ToyConfig() { return std::string(BOXGEN_SOURCE_DIR) + "/configs/toy.cfg"; }

// Runs the CLI and returns its exit status; stdout and stderr land in `log`.
int Cli(const std::vector<std::string>& args, const std::string& log = "/dev/null",
        const std::string& env = "") {
  std::string cmd = env + " " + Quote(BOXGEN_CLI_PATH);
  for (const std::string& a : args) cmd += " " + Quote(a);
  cmd += " > " + Quote(log) + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool OutsideEqual(const Image& a, const Image& b, const Box& box) {
  if (!a.SameShape(b)) return false;
  for (int c = 0; c < a.channels(); ++c) {
    for (int y = 0; y < a.height(); ++y) {
      for (int x = 0; x < a.width(); ++x) {
        if (!box.Contains(x, y) && a.at(c, y, x) != b.at(c, y, x)) return false;
      }
    }
  }
  return true;
}

// Trains a toy shape + colorizer checkpoint once for the whole suite.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir();
    const std::string cfg = ToyConfig();
    ASSERT_EQ(Cli({"--config", cfg, "train-shape", "--synthetic", "4", "--out",
                   (*dir_) / "shape.ckpt", "--log", (*dir_) / "shape.csv"}),
              0);
    ASSERT_EQ(Cli({"--config", cfg, "train-colorizer", "--synthetic", "4", "--resume",
                   (*dir_) / "shape.ckpt", "--out", (*dir_) / "pre.ckpt"}),
              0);
    ASSERT_EQ(Cli({"--config", cfg, "train-joint", "--synthetic", "4", "--pretrained",
                   (*dir_) / "pre.ckpt", "--out", (*dir_) / "full.ckpt", "--log",
                   (*dir_) / "joint.csv"}),
              0);
    std::mt19937_64 rng(3);
    WritePng((*dir_) / "input.png", testing::RandomImage8(3, 32, 48, rng));
  }
  static void TearDownTestSuite() { delete dir_; }

  static std::string Path(const std::string& name) { return (*dir_) / name; }

  static testing::TempDir* dir_;
};

testing::TempDir* CliTest::dir_ = nullptr;

TEST_F(CliTest, UsageErrorsExitWithTwo) {
  EXPECT_EQ(Cli({}), 2);
  EXPECT_EQ(Cli({"no-such-command"}), 2);
  EXPECT_EQ(Cli({"generate", "--image", Path("input.png")}), 2);
}

TEST_F(CliTest, TrainingWritesCheckpointsAndLogs) {
  const Checkpoint full = LoadCheckpoint(Path("full.ckpt"));
  for (GraphKind k : {GraphKind::kShape, GraphKind::kColorizer, GraphKind::kRefiner,
                      GraphKind::kDiscriminator}) {
    EXPECT_NE(full.Find(k), nullptr);
  }
  EXPECT_FLOAT_EQ(full.fill, 0.5f);
  std::istringstream log(Slurp(Path("shape.csv")));
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(log, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);  // header + 4 steps
  EXPECT_EQ(lines[1].rfind("1,", 0), 0u);
}

TEST_F(CliTest, TrainingIsDeterministic) {
  for (const char* cmd : {"train-shape", "train-disc"}) {
    std::vector<std::string> logs, ckpts;
    for (int run = 0; run < 2; ++run) {
      const std::string tag = std::string(cmd) + std::to_string(run);
      ASSERT_EQ(Cli({"--config", ToyConfig(), cmd, "--synthetic", "4", "--out",
                     Path(tag + ".ckpt"), "--log", Path(tag + ".csv")}),
                0);
      logs.push_back(Slurp(Path(tag + ".csv")));
      ckpts.push_back(Slurp(Path(tag + ".ckpt")));
    }
    EXPECT_EQ(logs[0], logs[1]) << cmd;
    EXPECT_EQ(ckpts[0], ckpts[1]) << cmd;
    EXPECT_FALSE(logs[0].empty());
  }
  // A different seed changes the run.
  ASSERT_EQ(Cli({"--config", ToyConfig(), "--seed", "10", "train-shape", "--synthetic", "4",
                 "--out", Path("seed10.ckpt"), "--log", Path("seed10.csv")}),
            0);
  EXPECT_NE(Slurp(Path("seed10.csv")), Slurp(Path("train-shape0.csv")));
}

TEST_F(CliTest, GenerateWritesTheBundleDeterministically) {
  const std::vector<std::string> args = {"generate", "--image", Path("input.png"), "--box",
                                         "8,6,24,16", "--checkpoint", Path("full.ckpt"),
                                         "--alpha-band", "3"};
  std::vector<std::string> out = args, again = args;
  out.insert(out.end(), {"--out", Path("gen1")});
  again.insert(again.end(), {"--out", Path("gen2")});
  ASSERT_EQ(Cli(out), 0);
  ASSERT_EQ(Cli(again), 0);
  for (const char* f : {"composed.png", "gray.png", "color.png", "blended.png", "manifest.json"}) {
    ASSERT_TRUE(fs::exists(Path("gen1/") + f)) << f;
    EXPECT_EQ(Slurp(Path("gen1/") + f), Slurp(Path("gen2/") + f)) << f;
  }
  const Image in = ReadImage(Path("input.png"));
  EXPECT_TRUE(OutsideEqual(ReadImage(Path("gen1/composed.png")), in, {8, 6, 24, 16}));
  const auto m = nlohmann::json::parse(Slurp(Path("gen1/manifest.json")));
  EXPECT_EQ(m["box"]["w"], 24);
  EXPECT_EQ(m["checkpoint"], CheckpointHash(LoadCheckpoint(Path("full.ckpt"))));
  EXPECT_FALSE(m.contains("timings_ms"));
}

TEST_F(CliTest, GenerateExitCodesSeparateFailureKinds) {
  const auto gen = [&](const std::string& box, const std::string& ckpt,
                       std::vector<std::string> extra = {}) {
    std::vector<std::string> a = {"generate", "--image", Path("input.png"), "--box", box,
                                  "--checkpoint", ckpt, "--out", Path("gen_err")};
    a.insert(a.end(), extra.begin(), extra.end());
    return Cli(a, Path("gen_err.log"));
  };
  EXPECT_EQ(gen("0,0,5,5", Path("full.ckpt")), 5);
  EXPECT_NE(Slurp(Path("gen_err.log")).find("w >= 10"), std::string::npos);
  EXPECT_EQ(gen("0,0,5,5", Path("full.ckpt"), {"--override-size-filter"}), 0);
  EXPECT_EQ(gen("40,0,20,12", Path("full.ckpt")), 4);
  EXPECT_EQ(gen("1,2", Path("full.ckpt")), 3);
  EXPECT_EQ(gen("0,0,12,12", Path("pre.ckpt")), 8);  // no refiner
  std::ofstream(Path("garbage.ckpt")) << "definitely not a checkpoint";
  EXPECT_EQ(gen("0,0,12,12", Path("garbage.ckpt")), 8);
  EXPECT_EQ(gen("0,0,12,12", Path("missing.ckpt")), 7);
}

TEST_F(CliTest, CheckpointDirectoryFromEnvironment) {
  const std::string env = "BOXGEN_CHECKPOINT_DIR=" + Quote(dir_->path().string());
  EXPECT_EQ(Cli({"generate", "--image", Path("input.png"), "--box", "8,6,24,16", "--checkpoint",
                 "full.ckpt", "--out", Path("gen_env")},
                "/dev/null", env),
            0);
  ASSERT_EQ(Cli({"generate", "--image", Path("input.png"), "--box", "8,6,24,16", "--checkpoint",
                 Path("full.ckpt"), "--out", Path("gen_abs")}),
            0);
  EXPECT_EQ(Slurp(Path("gen_env/composed.png")), Slurp(Path("gen_abs/composed.png")));
}

TEST_F(CliTest, SubstituteAndEval) {
  ASSERT_EQ(Cli({"--config", ToyConfig(), "substitute", "--synthetic", "3", "--image-id",
                 "synthetic_0001", "--index", "0", "--checkpoint", Path("full.ckpt"), "--out",
                 Path("sub")},
                Path("sub.log")),
            0)
      << Slurp(Path("sub.log"));
  EXPECT_TRUE(fs::exists(Path("sub/composed.png")));
  EXPECT_EQ(Cli({"--config", ToyConfig(), "substitute", "--synthetic", "3", "--image-id",
                 "synthetic_0001", "--index", "99", "--checkpoint", Path("full.ckpt"), "--out",
                 Path("sub")}),
            4);
  EXPECT_EQ(Cli({"--config", ToyConfig(), "substitute", "--synthetic", "3", "--image-id", "nope",
                 "--checkpoint", Path("full.ckpt"), "--out", Path("sub")}),
            7);

  for (const char* out : {"eval1", "eval2"}) {
    ASSERT_EQ(Cli({"--config", ToyConfig(), "eval", "--synthetic", "3", "--checkpoint",
                   Path("full.ckpt"), "--out", Path(out), "--extractor-size", "16",
                   "--extractor-dim", "8"},
                  Path("eval.log")),
              0)
        << Slurp(Path("eval.log"));
  }
  EXPECT_EQ(Slurp(Path("eval1/report.json")), Slurp(Path("eval2/report.json")));
  const auto report = nlohmann::json::parse(Slurp(Path("eval1/report.json")));
  for (const auto& row : report["recall"]) {
    EXPECT_EQ(row["recall_by_threshold"]["0.12"], 100.0);
    EXPECT_EQ(row["recall_by_threshold"]["0.3"], 100.0);
  }
  EXPECT_TRUE(fs::exists(Path("eval1/report.txt")));
  EXPECT_EQ(Cli({"--config", ToyConfig(), "eval", "--synthetic", "3", "--checkpoint",
                 Path("full.ckpt"), "--out", Path("eval3"), "--detector-cmd", "false"}),
            11);
}

TEST_F(CliTest, PrepareReportsPartialFailure) {
  fs::create_directories(Path("raw"));
  std::mt19937_64 rng(4);
  WritePng(Path("raw/a.png"), testing::RandomImage8(3, 72, 128, rng));
  std::ofstream(Path("raw/b.jpg")) << "broken";
  std::ofstream(Path("labels.json")) << R"([
    {"name": "a.png", "labels": [
      {"category": "car", "box2d": {"x1": 10, "y1": 10, "x2": 20, "y2": 18}}]},
    {"name": "b.jpg", "labels": []}])";
  EXPECT_EQ(Cli({"prepare", "--annotations", Path("labels.json"), "--images", Path("raw"),
                 "--out", Path("prepared")},
                Path("prepare.log")),
            13);
  EXPECT_NE(Slurp(Path("prepare.log")).find("b.jpg"), std::string::npos);
  EXPECT_TRUE(fs::exists(Path("prepared")));
  EXPECT_EQ(Cli({"prepare", "--annotations", Path("nothing.json"), "--out", Path("p2")}), 7);
}

TEST_F(CliTest, ServeRefusesABadCheckpoint) {
  EXPECT_EQ(Cli({"serve", "--checkpoint", Path("pre.ckpt"), "--port", "0"}), 8);
}

TEST_F(CliTest, ConfigErrors) {
  EXPECT_EQ(Cli({"--config", ToyConfig(), "--set", "batch_size=0", "train-shape", "--synthetic",
                 "2", "--out", Path("x.ckpt")}),
            3);
  EXPECT_EQ(Cli({"--config", ToyConfig(), "--set", "bogus=1", "train-shape", "--synthetic", "2",
                 "--out", Path("x.ckpt")}),
            3);
  EXPECT_EQ(Cli({"--config", ToyConfig(), "train-shape", "--out", Path("x.ckpt")}), 3);
}

}  // namespace
}  // namespace boxgen
