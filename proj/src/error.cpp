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

#include "mutacc/error.hpp"

namespace mutacc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kNotMutable: return "layer is not mutable";
    case ErrorCode::kIndexOutOfRange: return "index out of range";
    case ErrorCode::kBadMagic: return "bad magic number";
    case ErrorCode::kTruncated: return "truncated file";
    case ErrorCode::kCountMismatch: return "record count mismatch";
    case ErrorCode::kLabelOutOfRange: return "label out of range";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kVersionMismatch: return "version mismatch";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kUnsupportedLayer: return "unsupported layer";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kNoMutableLayers: return "no mutable layers";
    case ErrorCode::kClusteringMismatch: return "clustering does not match model";
    case ErrorCode::kIncompatible: return "model/dataset incompatibility";
  }
  return "unknown error";
}

}  // namespace mutacc
