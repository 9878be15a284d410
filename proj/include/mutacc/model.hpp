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

#ifndef MUTACC_MODEL_HPP
#define MUTACC_MODEL_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mutacc/layers.hpp"
#include "mutacc/tensor.hpp"

namespace mutacc {

/// Runs the shape-propagation pass. Returns the input shape of every layer
/// followed by the final output shape (layers.size() + 1 entries). Throws
/// Error{kShapeMismatch} naming the offending layer index.
std::vector<Shape> propagate_shapes(const Shape& input_shape,
                                    const std::vector<LayerSpec>& layers);

/// A validated feed-forward classifier. The layer list always ends in a
/// softmax activation producing `num_classes` probabilities.
///
/// Structure is fixed at construction; only per-neuron parameters can be
/// rewritten afterwards (which is how mutants are materialized).
class Model {
 public:
  Model(Shape input_shape, std::vector<LayerSpec> layers, std::size_t num_classes);

  const Shape& input_shape() const noexcept { return input_shape_; }
  const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
  std::size_t num_classes() const noexcept { return num_classes_; }

  /// Input shape of layer i; shape_at(layers().size()) is the output shape.
  const Shape& shape_at(std::size_t i) const { return shapes_.at(i); }

  /// Weights of neuron `neuron` in layer `layer` followed by its bias.
  Eigen::VectorXd neuron_params(std::size_t layer, std::size_t neuron) const;

  /// Inverse of neuron_params: writes weights and bias back.
  void set_neuron_params(std::size_t layer, std::size_t neuron,
                         const Eigen::Ref<const Eigen::VectorXd>& params);

 private:
  void check_neuron(std::size_t layer, std::size_t neuron) const;

  Shape input_shape_;
  std::vector<LayerSpec> layers_;
  std::size_t num_classes_;
  std::vector<Shape> shapes_;
};

Eigen::VectorXd forward(const Model& model, const Tensor& input);

std::size_t predict(const Model& model, const Tensor& input);

/// Batched forward pass. Each column of `inputs` is one flattened sample.
Eigen::MatrixXd forward_batch(const Model& model, const Eigen::MatrixXd& inputs);

/// Runs layers [first_layer, end) on activations that are the input of
/// `first_layer`. Returns the final probabilities.
Eigen::MatrixXd forward_from(const Model& model, std::size_t first_layer,
                             const Eigen::MatrixXd& activations);

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(const Eigen::Ref<const Eigen::VectorXd>& values);

std::vector<std::size_t> predict_batch(const Model& model, const Eigen::MatrixXd& inputs);

Eigen::VectorXd neuron_param_vector(const Model& model, std::size_t layer_idx,
                                    std::size_t neuron_idx);

}  // namespace mutacc

#endif  // MUTACC_MODEL_HPP
