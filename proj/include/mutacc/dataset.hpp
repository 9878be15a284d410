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

#ifndef MUTACC_DATASET_HPP
#define MUTACC_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mutacc/tensor.hpp"

namespace mutacc {

/// N labelled samples. Inputs are stored one sample per column, flattened
/// row-major from `sample_shape`, with values in [0, 1].
class LabeledDataset {
 public:
  LabeledDataset(Shape sample_shape, Eigen::MatrixXd inputs,
                 std::vector<std::size_t> labels, std::size_t num_classes);

  const Shape& sample_shape() const noexcept { return sample_shape_; }
  const Eigen::MatrixXd& inputs() const noexcept { return inputs_; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  std::size_t size() const noexcept { return labels_.size(); }

  Tensor sample(std::size_t i) const;

 private:
  Shape sample_shape_;
  Eigen::MatrixXd inputs_;
  std::vector<std::size_t> labels_;
  std::size_t num_classes_;
};

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// Decodes an IDX image/label pair already in memory. Pixel bytes are
/// divided by 255.
LabeledDataset parse_idx_pair(std::span<const std::uint8_t> images,
                              std::span<const std::uint8_t> labels,
                              std::size_t num_classes);

LabeledDataset load_idx_pair(const std::filesystem::path& images_path,
                             const std::filesystem::path& labels_path,
                             std::size_t num_classes);

/// IDX encoders. Pixels are mapped back to bytes by round(v * 255).
std::vector<std::uint8_t> encode_idx_images(const LabeledDataset& dataset);
std::vector<std::uint8_t> encode_idx_labels(const LabeledDataset& dataset);

void write_idx_pair(const LabeledDataset& dataset, const std::filesystem::path& images_path,
                    const std::filesystem::path& labels_path);

/// k records drawn uniformly without replacement, kept in original order.
LabeledDataset subset(const LabeledDataset& dataset, std::size_t k, std::uint64_t seed);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace mutacc

#endif  // MUTACC_DATASET_HPP
