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

#include "mutacc/neuron_clustering.hpp"

#include <cstdio>
#include <sstream>

#include "mutacc/model_io.hpp"

namespace mutacc {

Agglomeration<double> cluster_layer(std::span<const Eigen::VectorXd> features,
                                    std::size_t neurons_per_cluster) {
  if (features.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot cluster an empty layer");
  }
  const Eigen::Index dim = features.front().size();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(features.size()), dim);
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "feature " + std::to_string(i) + " has length " +
                      std::to_string(features[i].size()) + ", expected " +
                      std::to_string(dim));
    }
    rows.row(static_cast<Eigen::Index>(i)) = features[i].transpose();
  }
  return cluster_layer(rows, neurons_per_cluster);
}

std::size_t NeuronClustering::total_clusters() const {
  std::size_t total = 0;
  for (const auto& layer : layers) total += layer.clusters.size();
  return total;
}

NeuronClustering cluster_model(const Model& model, std::size_t neurons_per_cluster) {
  const auto targets = mutable_layers(model);
  if (targets.empty()) {
    throw Error(ErrorCode::kNoMutableLayers, "model has no dense or conv2d layers");
  }
  NeuronClustering out;
  out.neurons_per_cluster = neurons_per_cluster;
  for (const auto& layer : targets) {
    const std::size_t fan = fan_in(model.layers()[layer.layer_idx]);
    Eigen::MatrixXd features(static_cast<Eigen::Index>(layer.neuron_count),
                             static_cast<Eigen::Index>(fan + 1));
    for (std::size_t n = 0; n < layer.neuron_count; ++n) {
      features.row(static_cast<Eigen::Index>(n)) =
          neuron_param_vector(model, layer.layer_idx, n).transpose();
    }
    auto result = cluster_layer(features, neurons_per_cluster);
    out.layers.push_back({layer.layer_idx, std::move(result.clusters), std::move(result.merges)});
  }
  return out;
}

std::string dendrogram_table(const NeuronClustering& clustering) {
  std::ostringstream os;
  os << "layer\tstep\tfirst\tsecond\tdistance\tsize\n";
  char buf[64];
  for (const auto& layer : clustering.layers) {
    for (const auto& m : layer.merges) {
      std::snprintf(buf, sizeof buf, "%.10g", m.proximity);
      os << layer.layer_idx << '\t' << m.step << '\t' << m.first << '\t' << m.second << '\t'
         << buf << '\t' << m.merged_size << '\n';
    }
  }
  return os.str();
}

}  // namespace mutacc
