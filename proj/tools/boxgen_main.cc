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

// boxgen: command-line front end for data preparation, training,
// generation, evaluation and the HTTP service.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "boxgen/base/error.h"
#include "boxgen/base/hash.h"
#include "boxgen/codec/color_codec.h"
#include "boxgen/dataset/prepare.h"
#include "boxgen/dataset/samples.h"
#include "boxgen/evaluation/eval_runner.h"
#include "boxgen/imaging/image_io.h"
#include "boxgen/inference/generator.h"
#include "boxgen/networks/checkpoint.h"
#include "boxgen/training/config.h"
#include "boxgen/training/trainer.h"
#include "service/service.h"

namespace boxgen {
namespace {

namespace fs = std::filesystem;

constexpr char kCheckpointDirEnv[] = "BOXGEN_CHECKPOINT_DIR";

// Exit statuses; 2 is left to CLI11 usage errors.
int ExitCode(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return 3;
    case ErrorCode::kOutOfRange: return 4;
    case ErrorCode::kSizeFilter: return 5;
    case ErrorCode::kShapeMismatch: return 6;
    case ErrorCode::kNotFound: return 7;
    case ErrorCode::kDataLoss: return 8;
    case ErrorCode::kFailedPrecondition: return 9;
    case ErrorCode::kNumerical: return 10;
    case ErrorCode::kAdapter: return 11;
    case ErrorCode::kInternal: return 12;
  }
  return 12;
}
constexpr int kPartialFailure = 13;

struct Globals {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<uint64_t> seed;
  bool override_size_filter = false;
};

// Relative checkpoint paths resolve against $BOXGEN_CHECKPOINT_DIR.
std::string CheckpointPath(const std::string& path) {
  const char* dir = std::getenv(kCheckpointDirEnv);
  if (dir == nullptr || *dir == '\0' || fs::path(path).is_absolute()) return path;
  return (fs::path(dir) / path).string();
}

TrainingConfig MakeConfig(const Globals& g) {
  TrainingConfig config = g.config_path.empty() ? TrainingConfig{} : LoadConfig(g.config_path);
  for (const std::string& o : g.overrides) ApplyOverride(config, o);
  if (g.seed) config.seed = *g.seed;
  config.Validate();
  return config;
}

// Training data: a prepared dataset directory or procedural scenes.
struct DataSource {
  std::string dir;
  int synthetic = 0;

  void Register(CLI::App* cmd) {
    cmd->add_option("--data", dir, "Prepared dataset directory");
    cmd->add_option("--synthetic", synthetic, "Use N procedural scenes instead of --data");
  }

  std::vector<AnnotatedScene> Scenes(const TrainingConfig& config, double* mean_gray) const {
    if (synthetic > 0) {
      std::vector<AnnotatedScene> scenes =
          SyntheticScenes(synthetic, config.image_height, config.image_width, config.seed);
      *mean_gray = MeanGray(scenes);
      return scenes;
    }
    if (dir.empty()) Fail(ErrorCode::kInvalidArgument, "pass --data DIR or --synthetic N");
    Dataset data = LoadPreparedDataset(dir);
    *mean_gray = data.stats.mean_gray;
    return std::move(data.scenes);
  }

  std::vector<TrainingSample> Samples(const TrainingConfig& config) const {
    double mean_gray = 0.5;
    const std::vector<AnnotatedScene> scenes = Scenes(config, &mean_gray);
    return MakeSamples(scenes, ResolveFill(config, mean_gray));
  }
};

std::unique_ptr<LossLog> OpenLog(const std::string& path) {
  return path.empty() ? nullptr : std::make_unique<LossLog>(path);
}

RecordSink SinkFor(LossLog* log) {
  return [log](const LossRecord& r) {
    if (log != nullptr) log->Append(r);
  };
}

void PrintLast(const TrainResult& result, const std::string& out) {
  if (!result.records.empty()) std::cout << FormatLossRecord(result.records.back()) << '\n';
  std::cout << fmt::format("wrote {} (step {}, {})\n", out, result.checkpoint.step,
                           CheckpointHash(result.checkpoint));
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kDataLoss, "cannot write {}", path.string());
  out << text;
}

void WriteBundle(const fs::path& dir, const GenerationRequest& request,
                 const GenerationResult& result, const std::string& hash,
                 const StageTimings& timings, bool with_timings) {
  fs::create_directories(dir);
  WritePng((dir / "composed.png").string(), result.composed);
  WritePng((dir / "gray.png").string(), result.gray_stage);
  WritePng((dir / "color.png").string(), result.color_stage);
  if (result.blended) WritePng((dir / "blended.png").string(), *result.blended);
  nlohmann::json manifest = GenerationManifest(request, result, hash, timings);
  if (!with_timings) manifest.erase("timings_ms");
  WriteText(dir / "manifest.json", manifest.dump(2) + "\n");
}

int Run(int argc, char** argv) {
  CLI::App app{"Box-conditional vehicle inpainting"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config_path, "Training config (key = value lines)")
      ->check(CLI::ExistingFile);
  app.add_option("--set", g.overrides, "Config override key=value (repeatable)");
  app.add_option("--seed", g.seed, "Seed override");
  app.add_flag("--override-size-filter", g.override_size_filter,
               "Accept boxes outside the dataset size bounds");

  // prepare
  std::string annotations, images_dir, prepare_out;
  CLI::App* prepare = app.add_subcommand("prepare", "Resize scenes and filter boxes");
  prepare->add_option("--annotations", annotations, "Annotation JSON")->required();
  prepare->add_option("--images", images_dir, "Image root (default: annotation directory)");
  prepare->add_option("--out", prepare_out, "Output directory")->required();

  // training
  DataSource data;
  std::string train_out, resume_path, log_path, pretrained_path;
  CLI::App* train_shape = app.add_subcommand("train-shape", "Pretrain the shape network");
  CLI::App* train_color = app.add_subcommand("train-colorizer", "Pretrain the colorizer");
  CLI::App* train_joint = app.add_subcommand("train-joint", "Adversarial refiner training");
  CLI::App* train_disc =
      app.add_subcommand("train-disc", "Discriminator sanity run against zero-filled boxes");
  for (CLI::App* cmd : {train_shape, train_color, train_joint, train_disc}) {
    data.Register(cmd);
    cmd->add_option("--out", train_out, "Checkpoint to write")->required();
    cmd->add_option("--log", log_path, "Append losses to this CSV");
  }
  for (CLI::App* cmd : {train_shape, train_color}) {
    cmd->add_option("--resume", resume_path, "Continue from (or merge into) this checkpoint");
  }
  train_joint->add_option("--pretrained", pretrained_path,
                          "Checkpoint with shape and colorizer graphs")->required();

  // generation
  std::string ckpt_path, image_path, box_text, gen_out, image_id;
  int alpha_band = 0;
  size_t box_index = 0;
  bool with_timings = false;
  CLI::App* generate = app.add_subcommand("generate", "Generate a vehicle inside a box");
  generate->add_option("--image", image_path, "Input image")->required();
  generate->add_option("--box", box_text, "Box x,y,w,h")->required();
  CLI::App* substitute =
      app.add_subcommand("substitute", "Regenerate an annotated vehicle of a prepared scene");
  data.Register(substitute);
  substitute->add_option("--image-id", image_id, "Scene id")->required();
  substitute->add_option("--index", box_index, "Box index within the scene");
  for (CLI::App* cmd : {generate, substitute}) {
    cmd->add_option("--checkpoint", ckpt_path, "Trained checkpoint")->required();
    cmd->add_option("--out", gen_out, "Output directory")->required();
    cmd->add_option("--alpha-band", alpha_band, "Blend band in pixels (0: off)");
    cmd->add_flag("--timings", with_timings, "Record stage timings in the manifest");
  }

  // evaluation
  std::string eval_out, detector_cmd, extractor_cmd, extractor_id = "external";
  int extractor_size = 32, extractor_dim = 64;
  CLI::App* eval = app.add_subcommand("eval", "Detector recall and FID over regenerated boxes");
  data.Register(eval);
  eval->add_option("--checkpoint", ckpt_path, "Trained checkpoint")->required();
  eval->add_option("--out", eval_out, "Report directory")->required();
  eval->add_option("--detector-cmd", detector_cmd,
                   "External detector (default: ground-truth echo)");
  eval->add_option("--extractor-cmd", extractor_cmd,
                   "External feature extractor (default: random projection)");
  eval->add_option("--extractor-id", extractor_id, "Name recorded for the external extractor");
  eval->add_option("--extractor-size", extractor_size, "Extractor input size");
  eval->add_option("--extractor-dim", extractor_dim, "Extractor feature dimension");

  // service
  std::string host = "127.0.0.1", serve_images;
  int port = 8080, workers = 2;
  CLI::App* serve = app.add_subcommand("serve", "HTTP generation service");
  serve->add_option("--checkpoint", ckpt_path, "Trained checkpoint")->required();
  serve->add_option("--images", serve_images, "Directory of PNGs offered to clients");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0: any free port)");
  serve->add_option("--workers", workers, "Concurrent generations");

  // codec
  std::string codec_out = DataDir() + "/ab_bins_313.txt";
  CLI::App* make_codec = app.add_subcommand("make-codec", "Sweep the sRGB gamut into ab bins");
  make_codec->add_option("--out", codec_out, "Fixture path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : 2;
  }

  if (prepare->parsed()) {
    const PrepareReport report = PrepareDataset(annotations, prepare_out, SizeBounds{}, images_dir);
    std::cout << report.stats.ToJson().dump(2) << '\n';
    for (const std::string& e : report.errors) std::cerr << "error: " << e << '\n';
    return report.errors.empty() ? 0 : kPartialFailure;
  }

  if (train_shape->parsed() || train_color->parsed() || train_joint->parsed() ||
      train_disc->parsed()) {
    const TrainingConfig config = MakeConfig(g);
    const std::vector<TrainingSample> samples = data.Samples(config);
    std::unique_ptr<LossLog> log = OpenLog(log_path);
    std::optional<Checkpoint> resume;
    if (!resume_path.empty()) resume = LoadCheckpoint(CheckpointPath(resume_path));
    const Checkpoint* resume_ptr = resume ? &*resume : nullptr;
    TrainResult result;
    if (train_shape->parsed()) {
      result = PretrainShape(samples, config, resume_ptr, SinkFor(log.get()));
    } else if (train_color->parsed()) {
      result = PretrainColorizer(samples, config, resume_ptr, SinkFor(log.get()));
    } else if (train_joint->parsed()) {
      const Checkpoint pretrained = LoadCheckpoint(CheckpointPath(pretrained_path));
      result = TrainJoint(samples, config, pretrained, SinkFor(log.get()));
    } else {
      result = TrainDiscriminatorSanity(samples, config, SinkFor(log.get()));
      const Network<float> disc =
          Network<float>::Import(*result.checkpoint.Find(GraphKind::kDiscriminator));
      std::cout << fmt::format("zero-fill accuracy {:.4f}\n", ZeroFillAccuracy(disc, samples));
    }
    const std::string out = CheckpointPath(train_out);
    SaveCheckpoint(result.checkpoint, out);
    PrintLast(result, out);
    return 0;
  }

  if (generate->parsed() || substitute->parsed()) {
    const Generator generator(LoadCheckpoint(CheckpointPath(ckpt_path)));
    GenerationRequest request;
    request.options.alpha_band = alpha_band;
    request.options.override_size_filter = g.override_size_filter;
    request.options.seed = g.seed.value_or(0);
    if (generate->parsed()) {
      request.image = ReadImage(image_path);
      request.box = ParseBox(box_text);
    } else {
      TrainingConfig config = MakeConfig(g);
      double mean_gray = 0.5;
      const std::vector<AnnotatedScene> scenes = data.Scenes(config, &mean_gray);
      const AnnotatedScene* scene = nullptr;
      for (const AnnotatedScene& s : scenes) {
        if (s.image_id == image_id) scene = &s;
      }
      if (scene == nullptr) Fail(ErrorCode::kNotFound, "no scene '{}'", image_id);
      if (box_index >= scene->boxes.size()) {
        Fail(ErrorCode::kOutOfRange, "scene '{}' has {} boxes; index {} is out of range",
             image_id, scene->boxes.size(), box_index);
      }
      request.image = scene->image;
      request.box = scene->boxes[box_index];
    }
    StageTimings timings;
    const GenerationResult result = generator.Generate(request, &timings);
    WriteBundle(gen_out, request, result, generator.checkpoint_hash(), timings, with_timings);
    std::cout << fmt::format("wrote {}\n", gen_out);
    return 0;
  }

  if (eval->parsed()) {
    const TrainingConfig config = MakeConfig(g);
    double mean_gray = 0.5;
    const std::vector<AnnotatedScene> scenes = data.Scenes(config, &mean_gray);
    const Generator generator(LoadCheckpoint(CheckpointPath(ckpt_path)));
    std::unique_ptr<Detector> detector;
    if (detector_cmd.empty()) {
      detector = std::make_unique<GroundTruthEchoDetector>(EvalGroundTruth(scenes));
    } else {
      detector = std::make_unique<SubprocessDetector>(detector_cmd);
    }
    std::unique_ptr<FeatureExtractor> extractor;
    if (extractor_cmd.empty()) {
      extractor = std::make_unique<RandomProjectionExtractor>(extractor_size, extractor_dim,
                                                              config.seed);
    } else {
      extractor = std::make_unique<SubprocessExtractor>(extractor_cmd, extractor_id,
                                                        extractor_size, extractor_dim);
    }
    EvalOptions options;
    options.generation.override_size_filter = g.override_size_filter;
    const EvalReport report = RunEval(scenes, generator, *detector, *extractor, options);
    fs::create_directories(eval_out);
    WriteText(fs::path(eval_out) / "report.json", report.ToJson().dump(2) + "\n");
    WriteText(fs::path(eval_out) / "report.txt", report.ToText());
    std::cout << report.ToText();
    return 0;
  }

  if (serve->parsed()) {
    ServiceOptions options;
    options.image_dir = serve_images;
    options.workers = workers;
    Service service(LoadCheckpoint(CheckpointPath(ckpt_path)), options);
    httplib::Server server;
    service.Install(server);
    const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) Fail(ErrorCode::kFailedPrecondition, "cannot bind {}:{}", host, port);
    std::cout << fmt::format("listening on http://{}:{}\n", host, bound) << std::flush;
    server.listen_after_bind();
    return 0;
  }

  if (make_codec->parsed()) {
    const ColorBinCodec codec = ColorBinCodec::FromGamutSweep();
    codec.Save(codec_out);
    std::cout << fmt::format("wrote {} ({} bins)\n", codec_out, codec.count());
    return 0;
  }
  return 0;
}

}  // namespace
}  // namespace boxgen

int main(int argc, char** argv) {
  try {
    return boxgen::Run(argc, argv);
  } catch (const boxgen::Error& e) {
    std::cerr << "boxgen: " << boxgen::ErrorCodeName(e.code()) << ": " << e.what() << '\n';
    return boxgen::ExitCode(e.code());
  } catch (const std::exception& e) {
    std::cerr << "boxgen: internal: " << e.what() << '\n';
    return boxgen::ExitCode(boxgen::ErrorCode::kInternal);
  }
}
