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

#include "mutacc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

#include "mutacc/error.hpp"
#include "mutacc/random.hpp"

namespace mutacc {
namespace {

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, const char* what)
      : bytes_(bytes), what_(what) {}

  std::uint32_t u32be() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | bytes_[pos_++];
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw Error(ErrorCode::kTruncated, std::string(what_) + " file is truncated");
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  const char* what_;
};

void put_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

LabeledDataset::LabeledDataset(Shape sample_shape, Eigen::MatrixXd inputs,
                               std::vector<std::size_t> labels, std::size_t num_classes)
    : sample_shape_(std::move(sample_shape)),
      inputs_(std::move(inputs)),
      labels_(std::move(labels)),
      num_classes_(num_classes) {
  if (num_classes_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "num_classes must be positive");
  }
  if (labels_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "dataset must contain at least one record");
  }
  if (static_cast<std::size_t>(inputs_.cols()) != labels_.size()) {
    throw Error(ErrorCode::kCountMismatch,
                std::to_string(inputs_.cols()) + " inputs but " +
                    std::to_string(labels_.size()) + " labels");
  }
  if (static_cast<std::size_t>(inputs_.rows()) != element_count(sample_shape_)) {
    throw Error(ErrorCode::kShapeMismatch,
                "sample shape " + to_string(sample_shape_) + " does not match " +
                    std::to_string(inputs_.rows()) + " values per sample");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= num_classes_) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  "label " + std::to_string(labels_[i]) + " at record " +
                      std::to_string(i) + " is >= num_classes " +
                      std::to_string(num_classes_));
    }
  }
}

Tensor LabeledDataset::sample(std::size_t i) const {
  return Tensor(sample_shape_, inputs_.col(static_cast<Eigen::Index>(i)));
}

LabeledDataset parse_idx_pair(std::span<const std::uint8_t> images,
                              std::span<const std::uint8_t> labels,
                              std::size_t num_classes) {
  ByteReader img(images, "image");
  ByteReader lab(labels, "label");

  const std::uint32_t img_magic = img.u32be();
  if (img_magic != kIdxImagesMagic) {
    throw Error(ErrorCode::kBadMagic, "image file magic is not 0x00000803");
  }
  const std::uint32_t lab_magic = lab.u32be();
  if (lab_magic != kIdxLabelsMagic) {
    throw Error(ErrorCode::kBadMagic, "label file magic is not 0x00000801");
  }

  const std::size_t n = img.u32be();
  const std::size_t h = img.u32be();
  const std::size_t w = img.u32be();
  const std::size_t n_labels = lab.u32be();
  if (n != n_labels) {
    throw Error(ErrorCode::kCountMismatch, "image file holds " + std::to_string(n) +
                                               " records but label file holds " +
                                               std::to_string(n_labels));
  }
  if (n == 0 || h == 0 || w == 0) {
    throw Error(ErrorCode::kInvalidArgument, "IDX image file has an empty dimension");
  }

  const auto pixels = img.take(n * h * w);
  const auto label_bytes = lab.take(n);

  Eigen::MatrixXd inputs(static_cast<Eigen::Index>(h * w), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < h * w; ++j) {
      inputs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
          pixels[i * h * w + j] / 255.0;
    }
  }
  std::vector<std::size_t> label_values(label_bytes.begin(), label_bytes.end());
  return LabeledDataset({h, w}, std::move(inputs), std::move(label_values), num_classes);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIo, "write failed for " + path.string());
  }
}

LabeledDataset load_idx_pair(const std::filesystem::path& images_path,
                             const std::filesystem::path& labels_path,
                             std::size_t num_classes) {
  const auto images = read_file(images_path);
  const auto labels = read_file(labels_path);
  return parse_idx_pair(images, labels, num_classes);
}

std::vector<std::uint8_t> encode_idx_images(const LabeledDataset& dataset) {
  const Shape& s = dataset.sample_shape();
  if (s.size() != 2) {
    throw Error(ErrorCode::kShapeMismatch,
                "IDX images need HxW samples, got " + to_string(s));
  }
  std::vector<std::uint8_t> out;
  out.reserve(16 + dataset.size() * s[0] * s[1]);
  put_u32be(out, kIdxImagesMagic);
  put_u32be(out, static_cast<std::uint32_t>(dataset.size()));
  put_u32be(out, static_cast<std::uint32_t>(s[0]));
  put_u32be(out, static_cast<std::uint32_t>(s[1]));
  const Eigen::MatrixXd& x = dataset.inputs();
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    for (Eigen::Index j = 0; j < x.rows(); ++j) out.push_back(to_byte(x(j, i)));
  }
  return out;
}

std::vector<std::uint8_t> encode_idx_labels(const LabeledDataset& dataset) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + dataset.size());
  put_u32be(out, kIdxLabelsMagic);
  put_u32be(out, static_cast<std::uint32_t>(dataset.size()));
  for (auto label : dataset.labels()) out.push_back(static_cast<std::uint8_t>(label));
  return out;
}

void write_idx_pair(const LabeledDataset& dataset, const std::filesystem::path& images_path,
                    const std::filesystem::path& labels_path) {
  write_file(images_path, encode_idx_images(dataset));
  write_file(labels_path, encode_idx_labels(dataset));
}

LabeledDataset subset(const LabeledDataset& dataset, std::size_t k, std::uint64_t seed) {
  const std::size_t n = dataset.size();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::kInvalidArgument, "subset size " + std::to_string(k) +
                                                 " outside [1, " + std::to_string(n) + "]");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first k slots become the sample.
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(order[i], order[i + uniform_index(rng, n - i)]);
  }
  order.resize(k);
  std::sort(order.begin(), order.end());

  Eigen::MatrixXd inputs(dataset.inputs().rows(), static_cast<Eigen::Index>(k));
  std::vector<std::size_t> labels(k);
  for (std::size_t i = 0; i < k; ++i) {
    inputs.col(static_cast<Eigen::Index>(i)) =
        dataset.inputs().col(static_cast<Eigen::Index>(order[i]));
    labels[i] = dataset.labels()[order[i]];
  }
  return LabeledDataset(dataset.sample_shape(), std::move(inputs), std::move(labels),
                        dataset.num_classes());
}

}  // namespace mutacc
