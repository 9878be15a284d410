// Copyright 2026 The mutacc Authors.
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

#ifndef MUTACC_ERROR_HPP
#define MUTACC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mutacc {

enum class ErrorCode {
  kInvalidArgument,
  kShapeMismatch,
  kNonFinite,
  kNotMutable,
  kIndexOutOfRange,
  // dataset-io
  kBadMagic,
  kTruncated,
  kCountMismatch,
  kLabelOutOfRange,
  // model-io
  kParse,
  kVersionMismatch,
  kDimensionMismatch,
  kUnsupportedLayer,
  kIo,
  // mutation / clustering
  kNoMutableLayers,
  kClusteringMismatch,
  kIncompatible,
};

std::string_view to_string(ErrorCode code);

/// Structured error carrying a machine-readable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mutacc

#endif  // MUTACC_ERROR_HPP
