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

#ifndef MUTACC_LAYERS_HPP
#define MUTACC_LAYERS_HPP

#include <cstddef>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "mutacc/tensor.hpp"

namespace mutacc {

/// Fully connected layer. Row i of `weights` feeds output neuron i.
struct Dense {
  Eigen::MatrixXd weights;  // out_dim x in_dim
  Eigen::VectorXd bias;     // out_dim

  std::size_t in_dim() const { return static_cast<std::size_t>(weights.cols()); }
  std::size_t out_dim() const { return static_cast<std::size_t>(weights.rows()); }
};

/// 2-D convolution over a CxHxW input. Row f of `weights` holds filter f
/// flattened row-major as (in_channel, kernel_row, kernel_col).
struct Conv2D {
  std::size_t in_channels = 1;
  std::size_t kernel_h = 1;
  std::size_t kernel_w = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;
  Eigen::MatrixXd weights;  // out_channels x (in_channels * kernel_h * kernel_w)
  Eigen::VectorXd bias;     // out_channels

  std::size_t out_channels() const { return static_cast<std::size_t>(weights.rows()); }
  std::size_t fan_in() const { return in_channels * kernel_h * kernel_w; }
};

enum class PoolKind { kAvg, kMax };

struct Pool {
  PoolKind kind = PoolKind::kAvg;
  std::size_t window = 2;
  std::size_t stride = 2;
};

struct Flatten {};

enum class ActivationKind { kRelu, kTanh, kSoftmax };

struct Activation {
  ActivationKind kind = ActivationKind::kRelu;
};

using LayerSpec = std::variant<Dense, Conv2D, Pool, Flatten, Activation>;

std::string_view layer_name(const LayerSpec& layer);
std::string_view to_string(PoolKind kind);
std::string_view to_string(ActivationKind kind);

/// Checks internal consistency (array lengths, stride/window bounds).
/// Throws Error{kDimensionMismatch or kInvalidArgument}.
void validate_layer(const LayerSpec& layer);

/// Output shape for the given input shape; throws Error{kShapeMismatch}.
Shape output_shape(const LayerSpec& layer, const Shape& input);

/// Dense and Conv2D layers carry per-neuron parameters.
bool is_mutable(const LayerSpec& layer);

/// out_dim for Dense, out_channels for Conv2D, 0 otherwise.
std::size_t neuron_count(const LayerSpec& layer);

/// Number of weights per neuron (excluding bias); 0 for non-mutable layers.
std::size_t fan_in(const LayerSpec& layer);

/// Applies the layer to a batch. Each column of `batch` is one sample
/// flattened row-major with shape `input`.
Eigen::MatrixXd apply_layer(const LayerSpec& layer, const Shape& input,
                            const Eigen::MatrixXd& batch);

Tensor apply_layer(const LayerSpec& layer, const Tensor& input);

}  // namespace mutacc

#endif  // MUTACC_LAYERS_HPP
