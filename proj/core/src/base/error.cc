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

#include "boxgen/base/error.h"

namespace boxgen {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kOutOfRange:
      return "out_of_range";
    case ErrorCode::kSizeFilter:
      return "size_filter";
    case ErrorCode::kShapeMismatch:
      return "shape_mismatch";
    case ErrorCode::kNotFound:
      return "not_found";
    case ErrorCode::kDataLoss:
      return "data_loss";
    case ErrorCode::kFailedPrecondition:
      return "failed_precondition";
    case ErrorCode::kNumerical:
      return "numerical";
    case ErrorCode::kAdapter:
      return "adapter";
    case ErrorCode::kInternal:
      return "internal";
  }
  return "unknown";
}

}  // namespace boxgen
