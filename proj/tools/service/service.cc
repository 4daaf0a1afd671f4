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

#include "service.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "boxgen/imaging/image_io.h"

namespace boxgen {
namespace {

namespace fs = std::filesystem;

constexpr char kBoundary[] = "boxgen-part-3f9c1d";

void SendJson(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response& res, ErrorCode code, const std::string& message) {
  SendJson(res, HttpStatus(code),
           {{"error", std::string(ErrorCodeName(code))}, {"message", message}});
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kNotFound, "cannot read {}", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Box BoxFromJson(const nlohmann::json& j) {
  if (!j.is_object()) Fail(ErrorCode::kInvalidArgument, "box must be an object {{x, y, w, h}}");
  auto field = [&](const char* k) {
    if (!j.contains(k) || !j[k].is_number_integer()) {
      Fail(ErrorCode::kInvalidArgument, "box.{} must be an integer", k);
    }
    return j[k].get<int>();
  };
  return {field("x"), field("y"), field("w"), field("h")};
}

}  // namespace

int HttpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOutOfRange:
    case ErrorCode::kSizeFilter:
    case ErrorCode::kShapeMismatch:
      return 422;
    case ErrorCode::kInvalidArgument:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    default:
      return 500;
  }
}

Service::Service(const Checkpoint& checkpoint, ServiceOptions options)
    : generator_(checkpoint),
      options_(std::move(options)),
      slots_(std::max(1, options_.workers)) {
  if (options_.workers < 1) {
    Fail(ErrorCode::kInvalidArgument, "workers must be >= 1, got {}", options_.workers);
  }
  if (!options_.image_dir.empty()) {
    if (!fs::is_directory(options_.image_dir)) {
      Fail(ErrorCode::kNotFound, "image directory {} does not exist", options_.image_dir);
    }
    for (const auto& entry : fs::directory_iterator(options_.image_dir)) {
      if (entry.path().extension() != ".png") continue;
      const Image img = ReadImage(entry.path().string());
      images_.push_back({entry.path().stem().string(), entry.path().string(), img.height(),
                         img.width()});
    }
    std::sort(images_.begin(), images_.end(),
              [](const StoredImage& a, const StoredImage& b) { return a.id < b.id; });
  }
}

const StoredImage* Service::FindImage(const std::string& id) const {
  for (const StoredImage& s : images_) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

void Service::Install(httplib::Server& server) {
  const int threads = std::max(4, options_.workers + 2);
  server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  server.Get("/api/health", [this](const httplib::Request& q, httplib::Response& r) { Health(q, r); });
  server.Get("/api/images", [this](const httplib::Request& q, httplib::Response& r) { ListImages(q, r); });
  server.Get(R"(/api/images/([A-Za-z0-9_.\-]+))",
             [this](const httplib::Request& q, httplib::Response& r) { GetImage(q, r); });
  server.Post("/api/generate",
              [this](const httplib::Request& q, httplib::Response& r) { Generate(q, r); });
}

void Service::Health(const httplib::Request&, httplib::Response& res) const {
  SendJson(res, 200,
           {{"status", "ok"},
            {"version", kServiceVersion},
            {"checkpoint", generator_.checkpoint_hash()},
            {"size_bounds", options_.bounds.ToJson()},
            {"prepared", {{"height", kPreparedHeight}, {"width", kPreparedWidth}}},
            {"workers", options_.workers},
            {"requests", requests_.load()}});
}

void Service::ListImages(const httplib::Request&, httplib::Response& res) const {
  nlohmann::json list = nlohmann::json::array();
  for (const StoredImage& s : images_) {
    list.push_back({{"id", s.id}, {"height", s.height}, {"width", s.width}});
  }
  SendJson(res, 200, {{"images", list}});
}

void Service::GetImage(const httplib::Request& req, httplib::Response& res) const {
  const StoredImage* s = FindImage(req.matches[1]);
  if (s == nullptr) {
    SendError(res, ErrorCode::kNotFound, fmt::format("no image '{}'", std::string(req.matches[1])));
    return;
  }
  res.set_content(ReadFile(s->path), "image/png");
}

void Service::Generate(const httplib::Request& req, httplib::Response& res) {
  ++requests_;
  try {
    nlohmann::json body;
    GenerationRequest request;
    std::string image_id;
    try {
      if (req.is_multipart_form_data()) {
        if (!req.has_file("request")) Fail(ErrorCode::kInvalidArgument, "missing 'request' part");
        body = nlohmann::json::parse(req.get_file_value("request").content);
      } else {
        body = nlohmann::json::parse(req.body);
      }
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kInvalidArgument, "request is not valid JSON: {}", e.what());
    }
    if (!body.is_object()) Fail(ErrorCode::kInvalidArgument, "request must be a JSON object");
    if (req.is_multipart_form_data() && req.has_file("image")) {
      request.image = DecodeImage(req.get_file_value("image").content);
      image_id = "upload";
    } else if (body.contains("image_id") && body["image_id"].is_string()) {
      image_id = body["image_id"].get<std::string>();
      const StoredImage* s = FindImage(image_id);
      if (s == nullptr) Fail(ErrorCode::kNotFound, "no image '{}'", image_id);
      request.image = ReadImage(s->path);
    } else {
      Fail(ErrorCode::kInvalidArgument, "request needs image_id or an uploaded 'image' part");
    }
    if (!body.contains("box")) Fail(ErrorCode::kInvalidArgument, "request needs a box");
    request.box = BoxFromJson(body["box"]);
    request.options.bounds = options_.bounds;
    try {
      request.options.alpha_band = body.value("alpha_band", 0);
      request.options.seed = body.value("seed", uint64_t{0});
      request.options.override_size_filter = body.value("override_size_filter", false);
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kInvalidArgument, "bad request option: {}", e.what());
    }
    ValidateRequest(request);

    StageTimings timings;
    GenerationResult result;
    {
      slots_.acquire();
      struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
      } release{slots_};
      result = generator_.Generate(request, &timings);
    }
    nlohmann::json manifest =
        GenerationManifest(request, result, generator_.checkpoint_hash(), timings);
    manifest["image_id"] = image_id;
    const bool stages = req.get_param_value("stages") == "1";
    std::vector<MultipartPart> parts;
    parts.push_back({{{"content-type", "application/json"}}, "manifest", manifest.dump()});
    parts.push_back({{{"content-type", "image/png"}}, "composed", EncodePng(result.composed)});
    if (result.blended) {
      parts.push_back({{{"content-type", "image/png"}}, "blended", EncodePng(*result.blended)});
    }
    if (stages) {
      parts.push_back({{{"content-type", "image/png"}}, "gray", EncodePng(result.gray_stage)});
      parts.push_back({{{"content-type", "image/png"}}, "color", EncodePng(result.color_stage)});
    }
    std::string boundary = kBoundary;
    for (const MultipartPart& p : parts) {
      while (p.body.find(boundary) != std::string::npos) boundary += "x";
    }
    res.status = 200;
    res.set_content(BuildMultipart(parts, boundary), "multipart/mixed; boundary=" + boundary);
  } catch (const Error& e) {
    SendError(res, e.code(), e.what());
  }
}

std::string BuildMultipart(const std::vector<MultipartPart>& parts, const std::string& boundary) {
  std::string out;
  for (const MultipartPart& p : parts) {
    out += "--" + boundary + "\r\n";
    out += "Content-Disposition: inline; name=\"" + p.name + "\"\r\n";
    for (const auto& [k, v] : p.headers) {
      if (k != "content-disposition") out += k + ": " + v + "\r\n";
    }
    out += "\r\n" + p.body + "\r\n";
  }
  out += "--" + boundary + "--\r\n";
  return out;
}

std::vector<MultipartPart> ParseMultipart(const std::string& content_type,
                                          const std::string& body) {
  const std::string key = "boundary=";
  const size_t k = content_type.find(key);
  if (k == std::string::npos) {
    Fail(ErrorCode::kInvalidArgument, "content type '{}' has no boundary", content_type);
  }
  std::string boundary = Trim(content_type.substr(k + key.size()));
  if (const size_t semi = boundary.find(';'); semi != std::string::npos) {
    boundary = boundary.substr(0, semi);
  }
  if (boundary.size() >= 2 && boundary.front() == '"') boundary = boundary.substr(1, boundary.size() - 2);
  const std::string delim = "--" + boundary;
  std::vector<MultipartPart> parts;
  size_t pos = body.find(delim);
  if (pos == std::string::npos) Fail(ErrorCode::kDataLoss, "multipart body has no boundary");
  while (true) {
    pos += delim.size();
    if (body.compare(pos, 2, "--") == 0) break;
    pos += 2;  // CRLF after the delimiter
    const size_t header_end = body.find("\r\n\r\n", pos);
    if (header_end == std::string::npos) Fail(ErrorCode::kDataLoss, "truncated multipart headers");
    const size_t next = body.find("\r\n" + delim, header_end + 4);
    if (next == std::string::npos) Fail(ErrorCode::kDataLoss, "unterminated multipart part");
    MultipartPart part;
    std::istringstream headers(body.substr(pos, header_end - pos));
    std::string line;
    while (std::getline(headers, line)) {
      const size_t colon = line.find(':');
      if (colon == std::string::npos) continue;
      part.headers[Lower(Trim(line.substr(0, colon)))] = Trim(line.substr(colon + 1));
    }
    const std::string& disposition = part.headers["content-disposition"];
    if (const size_t n = disposition.find("name=\""); n != std::string::npos) {
      part.name = disposition.substr(n + 6, disposition.find('"', n + 6) - (n + 6));
    }
    part.body = body.substr(header_end + 4, next - (header_end + 4));
    parts.push_back(std::move(part));
    pos = next + 2;
  }
  return parts;
}

}  // namespace boxgen
