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

#include "mutacc/model.hpp"

#include <string>
#include <variant>

#include "mutacc/error.hpp"

namespace mutacc {

std::vector<Shape> propagate_shapes(const Shape& input_shape,
                                    const std::vector<LayerSpec>& layers) {
  std::vector<Shape> shapes;
  shapes.reserve(layers.size() + 1);
  shapes.push_back(input_shape);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    try {
      shapes.push_back(output_shape(layers[i], shapes.back()));
    } catch (const Error& e) {
      throw Error(e.code(), "layer " + std::to_string(i) + " (" +
                                std::string(layer_name(layers[i])) + "): " + e.what());
    }
  }
  return shapes;
}

Model::Model(Shape input_shape, std::vector<LayerSpec> layers, std::size_t num_classes)
    : input_shape_(std::move(input_shape)),
      layers_(std::move(layers)),
      num_classes_(num_classes) {
  if (layers_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "model has no layers");
  }
  if (num_classes_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "num_classes must be positive");
  }
  if (input_shape_.empty() || element_count(input_shape_) == 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "model input shape must be non-empty, got " + to_string(input_shape_));
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    try {
      validate_layer(layers_[i]);
    } catch (const Error& e) {
      throw Error(e.code(), "layer " + std::to_string(i) + " (" +
                                std::string(layer_name(layers_[i])) + "): " + e.what());
    }
  }
  const auto* last = std::get_if<Activation>(&layers_.back());
  if (last == nullptr || last->kind != ActivationKind::kSoftmax) {
    throw Error(ErrorCode::kShapeMismatch, "final layer must be a softmax activation");
  }
  shapes_ = propagate_shapes(input_shape_, layers_);
  const Shape& out = shapes_.back();
  if (out.size() != 1 || out[0] != num_classes_) {
    throw Error(ErrorCode::kShapeMismatch,
                "model output " + to_string(out) + " does not match num_classes " +
                    std::to_string(num_classes_));
  }
}

void Model::check_neuron(std::size_t layer, std::size_t neuron) const {
  if (layer >= layers_.size()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "layer index " + std::to_string(layer) + " out of range");
  }
  if (!is_mutable(layers_[layer])) {
    throw Error(ErrorCode::kNotMutable,
                "layer " + std::to_string(layer) + " (" +
                    std::string(layer_name(layers_[layer])) + ") has no neurons");
  }
  if (neuron >= neuron_count(layers_[layer])) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "neuron " + std::to_string(neuron) + " out of range for layer " +
                    std::to_string(layer) + " with " +
                    std::to_string(neuron_count(layers_[layer])) + " neurons");
  }
}

Eigen::VectorXd Model::neuron_params(std::size_t layer, std::size_t neuron) const {
  check_neuron(layer, neuron);
  const auto row = static_cast<Eigen::Index>(neuron);
  const auto extract = [row](const Eigen::MatrixXd& w, const Eigen::VectorXd& b) {
    Eigen::VectorXd v(w.cols() + 1);
    v.head(w.cols()) = w.row(row).transpose();
    v[w.cols()] = b[row];
    return v;
  };
  if (const auto* d = std::get_if<Dense>(&layers_[layer])) {
    return extract(d->weights, d->bias);
  }
  const auto& c = std::get<Conv2D>(layers_[layer]);
  return extract(c.weights, c.bias);
}

void Model::set_neuron_params(std::size_t layer, std::size_t neuron,
                              const Eigen::Ref<const Eigen::VectorXd>& params) {
  check_neuron(layer, neuron);
  if (!params.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "neuron parameters contain NaN or Inf");
  }
  const auto row = static_cast<Eigen::Index>(neuron);
  const auto store = [&](Eigen::MatrixXd& w, Eigen::VectorXd& b) {
    if (params.size() != w.cols() + 1) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "expected " + std::to_string(w.cols() + 1) + " parameters, got " +
                      std::to_string(params.size()));
    }
    w.row(row) = params.head(w.cols()).transpose();
    b[row] = params[w.cols()];
  };
  if (auto* d = std::get_if<Dense>(&layers_[layer])) {
    store(d->weights, d->bias);
  } else {
    auto& c = std::get<Conv2D>(layers_[layer]);
    store(c.weights, c.bias);
  }
}

Eigen::MatrixXd forward_from(const Model& model, std::size_t first_layer,
                             const Eigen::MatrixXd& activations) {
  Eigen::MatrixXd current = activations;
  const auto& layers = model.layers();
  for (std::size_t i = first_layer; i < layers.size(); ++i) {
    current = apply_layer(layers[i], model.shape_at(i), current);
  }
  return current;
}

Eigen::MatrixXd forward_batch(const Model& model, const Eigen::MatrixXd& inputs) {
  const auto expected = static_cast<Eigen::Index>(element_count(model.input_shape()));
  if (inputs.rows() != expected) {
    throw Error(ErrorCode::kShapeMismatch,
                "layer 0: expected input " + to_string(model.input_shape()) + " (" +
                    std::to_string(expected) + " values), got " +
                    std::to_string(inputs.rows()) + " values");
  }
  return forward_from(model, 0, inputs);
}

Eigen::VectorXd forward(const Model& model, const Tensor& input) {
  if (input.shape() != model.input_shape()) {
    throw Error(ErrorCode::kShapeMismatch, "layer 0 (" +
                                               std::string(layer_name(model.layers()[0])) +
                                               "): expected input " +
                                               to_string(model.input_shape()) + ", got " +
                                               to_string(input.shape()));
  }
  return forward_from(model, 0, Eigen::MatrixXd(input.data())).col(0);
}

std::size_t argmax(const Eigen::Ref<const Eigen::VectorXd>& values) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return static_cast<std::size_t>(best);
}

std::size_t predict(const Model& model, const Tensor& input) {
  return argmax(forward(model, input));
}

std::vector<std::size_t> predict_batch(const Model& model, const Eigen::MatrixXd& inputs) {
  const Eigen::MatrixXd probs = forward_batch(model, inputs);
  std::vector<std::size_t> out(static_cast<std::size_t>(probs.cols()));
  for (Eigen::Index c = 0; c < probs.cols(); ++c) {
    out[static_cast<std::size_t>(c)] = argmax(probs.col(c));
  }
  return out;
}

Eigen::VectorXd neuron_param_vector(const Model& model, std::size_t layer_idx,
                                    std::size_t neuron_idx) {
  return model.neuron_params(layer_idx, neuron_idx);
}

}  // namespace mutacc
