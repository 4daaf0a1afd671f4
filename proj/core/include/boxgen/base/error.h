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

#ifndef BOXGEN_BASE_ERROR_H_
#define BOXGEN_BASE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

#include <fmt/format.h>

namespace boxgen {

// Error categories. The CLI maps these onto distinct exit codes and the
// HTTP service onto status codes, so callers can tell a rejected box from a
// corrupt checkpoint without parsing messages.
enum class ErrorCode {
  kInvalidArgument,
  kOutOfRange,       // geometry outside its image
  kSizeFilter,       // box violates the dataset size bounds
  kShapeMismatch,    // tensor / image dimensions disagree
  kNotFound,
  kDataLoss,         // corrupt or unreadable file
  kFailedPrecondition,
  kNumerical,        // NaN / Inf during optimization
  kAdapter,          // external detector / extractor failure
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

template <typename... Args>
[[noreturn]] void Fail(ErrorCode code, fmt::format_string<Args...> format,
                       Args&&... args) {
  throw Error(code, fmt::format(format, std::forward<Args>(args)...));
}

}  // namespace boxgen

#endif  // BOXGEN_BASE_ERROR_H_
