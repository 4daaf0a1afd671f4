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

#ifndef BOXGEN_TOOLS_SERVICE_H_
#define BOXGEN_TOOLS_SERVICE_H_

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "boxgen/base/error.h"
#include "boxgen/dataset/prepare.h"
#include "boxgen/inference/generator.h"

// After Eigen: the resolver header pulled in here defines an `_res` macro
// that collides with Eigen parameter names.
#include <httplib.h>

namespace boxgen {

inline constexpr char kServiceVersion[] = "0.1.0";

struct ServiceOptions {
  std::string image_dir;  // *.png served under their file stem
  int workers = 2;        // concurrent generations; further requests queue
  SizeBounds bounds;
};

// Metadata of one server-side image.
struct StoredImage {
  std::string id;
  std::string path;
  int height = 0;
  int width = 0;
};

// HTTP front end over a frozen Generator:
//   GET  /api/health
//   GET  /api/images
//   GET  /api/images/{id}
//   POST /api/generate[?stages=1]
// Generation replies are multipart/mixed: a "manifest" JSON part, a
// "composed" PNG part and, with stages=1, "gray" and "color" PNG parts.
class Service {
 public:
  // Throws kDataLoss when the checkpoint lacks a generator graph.
  Service(const Checkpoint& checkpoint, ServiceOptions options);

  // Registers the handlers on `server` and sizes its thread pool.
  void Install(httplib::Server& server);

  long requests() const { return requests_.load(); }
  const std::vector<StoredImage>& images() const { return images_; }

  // Handlers, exposed for tests that bypass the socket.
  void Health(const httplib::Request& req, httplib::Response& res) const;
  void ListImages(const httplib::Request& req, httplib::Response& res) const;
  void GetImage(const httplib::Request& req, httplib::Response& res) const;
  void Generate(const httplib::Request& req, httplib::Response& res);

 private:
  const StoredImage* FindImage(const std::string& id) const;

  Generator generator_;
  ServiceOptions options_;
  std::vector<StoredImage> images_;
  std::counting_semaphore<> slots_;
  std::atomic<long> requests_{0};
};

// HTTP status for an error category: 422 for requests that violate a box
// or image invariant, 404 for unknown ids, 400 for malformed input.
int HttpStatus(ErrorCode code);

struct MultipartPart {
  std::map<std::string, std::string> headers;  // lower-case names
  std::string name;                            // from Content-Disposition
  std::string body;
};

std::string BuildMultipart(const std::vector<MultipartPart>& parts, const std::string& boundary);

// Splits a multipart/mixed body; `content_type` carries the boundary.
std::vector<MultipartPart> ParseMultipart(const std::string& content_type,
                                          const std::string& body);

}  // namespace boxgen

#endif  // BOXGEN_TOOLS_SERVICE_H_
