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

#ifndef MUTACC_TENSOR_HPP
#define MUTACC_TENSOR_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mutacc {

using Shape = std::vector<std::size_t>;

std::size_t element_count(const Shape& shape);
std::string to_string(const Shape& shape);

/// Dense row-major tensor of doubles. Every value is finite and the shape
/// product equals the data length.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, Eigen::VectorXd data);

  /// Convenience for rank-1 tensors.
  static Tensor vector(std::initializer_list<double> values);

  const Shape& shape() const noexcept { return shape_; }
  const Eigen::VectorXd& data() const noexcept { return data_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(data_.size()); }

 private:
  Shape shape_;
  Eigen::VectorXd data_;
};

}  // namespace mutacc

#endif  // MUTACC_TENSOR_HPP
