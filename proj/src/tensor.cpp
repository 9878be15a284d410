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

#include "mutacc/tensor.hpp"

#include <functional>
#include <numeric>

#include "mutacc/error.hpp"

namespace mutacc {

std::size_t element_count(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string to_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

Tensor::Tensor(Shape shape, Eigen::VectorXd data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "tensor shape must have rank >= 1");
  }
  for (auto d : shape_) {
    if (d == 0) {
      throw Error(ErrorCode::kShapeMismatch,
                  "tensor dimensions must be positive, got " + to_string(shape_));
    }
  }
  if (element_count(shape_) != static_cast<std::size_t>(data_.size())) {
    throw Error(ErrorCode::kShapeMismatch,
                "tensor shape " + to_string(shape_) + " does not match " +
                    std::to_string(data_.size()) + " values");
  }
  if (!data_.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "tensor contains NaN or Inf");
  }
}

Tensor Tensor::vector(std::initializer_list<double> values) {
  Eigen::VectorXd data(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) data[i++] = v;
  return Tensor({values.size()}, std::move(data));
}

}  // namespace mutacc
