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

#include "mutacc/mutation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mutacc/error.hpp"
#include "mutacc/model_io.hpp"
#include "mutacc/neuron_clustering.hpp"

namespace mutacc {
namespace {

void validate_mutator(const Mutator& mutator) {
  if (mutator.op != Operator::kChangeWeights) return;
  if (!std::isfinite(mutator.fraction) || mutator.fraction <= -1.0 ||
      mutator.fraction == 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "change-weights fraction must be > -1 and non-zero, got " +
                    std::to_string(mutator.fraction));
  }
}

void append_target(std::vector<Mutant>& out, TargetGroup target, double change_fraction) {
  for (Operator op : kOperatorOrder) {
    Mutator m{op, op == Operator::kChangeWeights ? change_fraction : 0.0};
    out.push_back({out.size(), {m, target}});
  }
}

}  // namespace

std::string_view to_string(Operator op) {
  switch (op) {
    case Operator::kChangeWeights: return "change_weights";
    case Operator::kNeuronBlock: return "neuron_block";
    case Operator::kNeuronInverse: return "neuron_inverse";
  }
  return "unknown";
}

void validate_spec(const Model& model, const MutationSpec& spec) {
  validate_mutator(spec.mutator);
  const auto& layers = model.layers();
  const std::size_t l = spec.target.layer_idx;
  if (l >= layers.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "target layer " + std::to_string(l) +
                                                 " out of range");
  }
  if (!is_mutable(layers[l])) {
    throw Error(ErrorCode::kNotMutable, "target layer " + std::to_string(l) + " (" +
                                            std::string(layer_name(layers[l])) +
                                            ") is not mutable");
  }
  const auto& neurons = spec.target.neurons;
  if (neurons.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "target neuron group is empty");
  }
  const std::size_t count = neuron_count(layers[l]);
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    if (neurons[i] >= count) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "target neuron " + std::to_string(neurons[i]) + " out of range for layer " +
                      std::to_string(l) + " with " + std::to_string(count) + " neurons");
    }
    if (i > 0 && neurons[i] <= neurons[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "target neurons must be strictly ascending and distinct");
    }
  }
}

std::vector<Mutant> generate_vanilla_mutants(const Model& model, double change_fraction) {
  validate_mutator(Mutator::change_weights(change_fraction));
  const auto layers = mutable_layers(model);
  if (layers.empty()) {
    throw Error(ErrorCode::kNoMutableLayers, "model has no dense or conv2d layers");
  }
  std::vector<Mutant> out;
  for (const auto& layer : layers) {
    for (std::size_t n = 0; n < layer.neuron_count; ++n) {
      append_target(out, {layer.layer_idx, {n}}, change_fraction);
    }
  }
  return out;
}

std::vector<Mutant> generate_cluster_mutants(const Model& model,
                                             const NeuronClustering& clustering,
                                             double change_fraction) {
  validate_mutator(Mutator::change_weights(change_fraction));
  const auto layers = mutable_layers(model);
  if (layers.empty()) {
    throw Error(ErrorCode::kNoMutableLayers, "model has no dense or conv2d layers");
  }
  if (clustering.layers.size() != layers.size()) {
    throw Error(ErrorCode::kClusteringMismatch,
                "clustering covers " + std::to_string(clustering.layers.size()) +
                    " layers, model has " + std::to_string(layers.size()) +
                    " mutable layers");
  }
  std::vector<Mutant> out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& lc = clustering.layers[i];
    if (lc.layer_idx != layers[i].layer_idx) {
      throw Error(ErrorCode::kClusteringMismatch,
                  "clustering entry " + std::to_string(i) + " targets layer " +
                      std::to_string(lc.layer_idx) + ", expected " +
                      std::to_string(layers[i].layer_idx));
    }
    std::vector<bool> seen(layers[i].neuron_count, false);
    std::size_t covered = 0;
    for (const auto& cluster : lc.clusters) {
      if (cluster.empty()) {
        throw Error(ErrorCode::kClusteringMismatch, "empty neuron cluster");
      }
      for (std::size_t n : cluster) {
        if (n >= seen.size() || seen[n]) {
          throw Error(ErrorCode::kClusteringMismatch,
                      "clusters of layer " + std::to_string(lc.layer_idx) +
                          " are not a partition of its neurons");
        }
        seen[n] = true;
        ++covered;
      }
    }
    if (covered != seen.size()) {
      throw Error(ErrorCode::kClusteringMismatch,
                  "clusters of layer " + std::to_string(lc.layer_idx) + " cover " +
                      std::to_string(covered) + " of " + std::to_string(seen.size()) +
                      " neurons");
    }
    for (const auto& cluster : lc.clusters) {
      TargetGroup target{lc.layer_idx, cluster};
      std::sort(target.neurons.begin(), target.neurons.end());
      append_target(out, std::move(target), change_fraction);
    }
  }
  return out;
}

Eigen::VectorXd mutate_params(const Mutator& mutator, const Eigen::VectorXd& params) {
  switch (mutator.op) {
    case Operator::kChangeWeights:
      return params * (1.0 + mutator.fraction);
    case Operator::kNeuronBlock:
      return Eigen::VectorXd::Zero(params.size());
    case Operator::kNeuronInverse:
      return -params;
  }
  return params;
}

Model materialize(const Model& model, const MutationSpec& spec) {
  validate_spec(model, spec);
  Model mutant = model;
  for (std::size_t n : spec.target.neurons) {
    mutant.set_neuron_params(spec.target.layer_idx, n,
                             mutate_params(spec.mutator,
                                           model.neuron_params(spec.target.layer_idx, n)));
  }
  return mutant;
}

}  // namespace mutacc
