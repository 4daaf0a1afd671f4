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

#include "boxgen/networks/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "boxgen/base/error.h"
#include "boxgen/base/hash.h"

namespace boxgen {
namespace {

constexpr char kMagic[8] = {'B', 'X', 'G', 'C', 'K', 'P', 'T', '\0'};
// Guards against absurd allocations from corrupt headers.
constexpr uint64_t kMaxElements = uint64_t{1} << 32;

class Writer {
 public:
  void U32(uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void U64(uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void I32(int32_t v) { U32(static_cast<uint32_t>(v)); }
  void I64(int64_t v) { U64(static_cast<uint64_t>(v)); }
  void F32(float v) { U32(std::bit_cast<uint32_t>(v)); }
  void Str(std::string_view s) {
    U32(static_cast<uint32_t>(s.size()));
    out_.append(s);
  }
  void Raw(const char* p, size_t n) { out_.append(p, n); }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  void Need(size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      Fail(ErrorCode::kDataLoss, "checkpoint truncated while reading {} at byte {}",
           what, pos_);
    }
  }
  uint32_t U32(const char* what) {
    Need(4, what);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 4;
    return v;
  }
  uint64_t U64(const char* what) {
    Need(8, what);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += 8;
    return v;
  }
  int32_t I32(const char* what) { return static_cast<int32_t>(U32(what)); }
  int64_t I64(const char* what) { return static_cast<int64_t>(U64(what)); }
  float F32(const char* what) { return std::bit_cast<float>(U32(what)); }
  std::string Str(const char* what) {
    const uint32_t n = U32(what);
    Need(n, what);
    std::string s(bytes_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string_view Raw(size_t n, const char* what) {
    Need(n, what);
    std::string_view s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  size_t pos_ = 0;
};

}  // namespace

const GraphState* Checkpoint::Find(GraphKind kind) const {
  for (const GraphState& g : graphs) {
    if (g.kind == kind) return &g;
  }
  return nullptr;
}

void Checkpoint::Put(GraphState state) {
  for (GraphState& g : graphs) {
    if (g.kind == state.kind) {
      g = std::move(state);
      return;
    }
  }
  graphs.push_back(std::move(state));
}

void Checkpoint::Require(std::initializer_list<GraphKind> kinds) const {
  for (GraphKind k : kinds) {
    if (Find(k) == nullptr) {
      Fail(ErrorCode::kDataLoss, "checkpoint has no '{}' graph", GraphName(k));
    }
  }
}

std::string SerializeCheckpoint(const Checkpoint& checkpoint) {
  Writer w;
  w.Raw(kMagic, sizeof(kMagic));
  w.U32(Checkpoint::kVersion);
  w.I64(checkpoint.step);
  w.U64(checkpoint.config_hash);
  w.F32(checkpoint.fill);
  w.U32(static_cast<uint32_t>(checkpoint.graphs.size()));
  for (const GraphState& g : checkpoint.graphs) {
    w.Str(GraphName(g.kind));
    w.I32(g.options.width_divisor);
    w.I32(g.options.image_height);
    w.I32(g.options.image_width);
    w.U32(static_cast<uint32_t>(g.tensors.size()));
    for (const NamedTensor& t : g.tensors) {
      if (t.data.size() != t.shape.size()) {
        Fail(ErrorCode::kInternal, "tensor '{}' holds {} values for shape {}", t.name,
             t.data.size(), t.shape.ToString());
      }
      w.Str(t.name);
      w.I32(t.shape.n);
      w.I32(t.shape.c);
      w.I32(t.shape.h);
      w.I32(t.shape.w);
      for (float v : t.data) w.F32(v);
    }
  }
  return w.Take();
}

Checkpoint ParseCheckpoint(std::string_view bytes) {
  Reader r(bytes);
  const std::string_view magic = r.Raw(sizeof(kMagic), "magic");
  if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0) {
    Fail(ErrorCode::kDataLoss, "not a boxgen checkpoint (bad magic)");
  }
  const uint32_t version = r.U32("version");
  if (version != Checkpoint::kVersion) {
    Fail(ErrorCode::kDataLoss, "unsupported checkpoint version {} (expected {})",
         version, Checkpoint::kVersion);
  }
  Checkpoint out;
  out.step = r.I64("step");
  out.config_hash = r.U64("config hash");
  out.fill = r.F32("fill");
  if (!(out.fill >= 0.0f && out.fill <= 1.0f)) {
    Fail(ErrorCode::kDataLoss, "checkpoint fill {} outside [0, 1]", out.fill);
  }
  const uint32_t graphs = r.U32("graph count");
  for (uint32_t gi = 0; gi < graphs; ++gi) {
    GraphState g;
    const std::string name = r.Str("graph name");
    try {
      g.kind = ParseGraphKind(name);
    } catch (const Error&) {
      Fail(ErrorCode::kDataLoss, "checkpoint graph {} has unknown name '{}'", gi, name);
    }
    g.options.width_divisor = r.I32("width divisor");
    g.options.image_height = r.I32("image height");
    g.options.image_width = r.I32("image width");
    const uint32_t tensors = r.U32("tensor count");
    for (uint32_t ti = 0; ti < tensors; ++ti) {
      NamedTensor t;
      t.name = r.Str("tensor name");
      t.shape.n = r.I32("tensor shape");
      t.shape.c = r.I32("tensor shape");
      t.shape.h = r.I32("tensor shape");
      t.shape.w = r.I32("tensor shape");
      if (t.shape.n < 0 || t.shape.c < 0 || t.shape.h < 0 || t.shape.w < 0 ||
          t.shape.size() > kMaxElements) {
        Fail(ErrorCode::kDataLoss, "tensor '{}' has invalid shape {}", t.name,
             t.shape.ToString());
      }
      r.Need(t.shape.size() * 4, "tensor data");
      t.data.resize(t.shape.size());
      for (float& v : t.data) v = r.F32("tensor data");
      g.tensors.push_back(std::move(t));
    }
    out.graphs.push_back(std::move(g));
  }
  if (!r.done()) Fail(ErrorCode::kDataLoss, "trailing bytes after checkpoint payload");
  return out;
}

void SaveCheckpoint(const Checkpoint& checkpoint, const std::string& path) {
  const std::string bytes = SerializeCheckpoint(checkpoint);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kDataLoss, "cannot write checkpoint '{}'", path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kNotFound, "cannot open checkpoint '{}'", path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseCheckpoint(buffer.str());
  } catch (const Error& e) {
    Fail(ErrorCode::kDataLoss, "{}: {}", path, e.what());
  }
}

std::string CheckpointHash(const Checkpoint& checkpoint) {
  return HashHex(SerializeCheckpoint(checkpoint));
}

}  // namespace boxgen
