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

#ifndef BOXGEN_BASE_HASH_H_
#define BOXGEN_BASE_HASH_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace boxgen {

// 64-bit FNV-1a. Used for checkpoint and config fingerprints in manifests;
// not a cryptographic digest.
class Fnv1a64 {
 public:
  void Update(std::span<const std::byte> bytes);
  void Update(std::string_view text);
  uint64_t digest() const { return state_; }
  std::string HexDigest() const;

 private:
  uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string HashHex(std::string_view text);

// Directory holding shipped fixtures (architecture tables, codec bins).
// Honors BOXGEN_DATA_DIR when set.
std::string DataDir();

}  // namespace boxgen

#endif  // BOXGEN_BASE_HASH_H_
