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

#ifndef MUTACC_NEURON_CLUSTERING_HPP
#define MUTACC_NEURON_CLUSTERING_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mutacc/error.hpp"
#include "mutacc/hac.hpp"
#include "mutacc/model.hpp"

namespace mutacc {

/// ceil(n / s): the number of clusters produced for a layer of n neurons.
constexpr std::size_t target_cluster_count(std::size_t n, std::size_t s) {
  return (n + s - 1) / s;
}

/// Clusters the rows of `features` (one row per neuron) into exactly
/// ceil(n/s) groups by average-linkage agglomeration on Euclidean distance.
template <typename Derived>
Agglomeration<typename Derived::Scalar> cluster_layer(
    const Eigen::MatrixBase<Derived>& features, std::size_t neurons_per_cluster) {
  using Scalar = typename Derived::Scalar;
  if (features.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "cannot cluster an empty layer");
  }
  if (neurons_per_cluster < 1) {
    throw Error(ErrorCode::kInvalidArgument, "neurons per cluster must be >= 1");
  }
  const std::size_t target =
      target_cluster_count(static_cast<std::size_t>(features.rows()), neurons_per_cluster);
  return agglomerate_average(pairwise_distances(features), Closeness::kSmallerIsCloser,
                             [target](std::size_t active, Scalar) { return active > target; });
}

/// Same, for a list of per-neuron vectors. Throws on ragged input.
Agglomeration<double> cluster_layer(std::span<const Eigen::VectorXd> features,
                                    std::size_t neurons_per_cluster);

struct LayerClusters {
  std::size_t layer_idx = 0;
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<MergeStep<double>> merges;
};

struct NeuronClustering {
  std::size_t neurons_per_cluster = 1;
  std::vector<LayerClusters> layers;  // one entry per mutable layer, model order

  std::size_t total_clusters() const;
};

/// Runs cluster_layer on every mutable layer using neuron_param_vector features.
NeuronClustering cluster_model(const Model& model, std::size_t neurons_per_cluster);

/// Text table of every merge: layer, step, pair, distance, merged size.
std::string dendrogram_table(const NeuronClustering& clustering);

}  // namespace mutacc

#endif  // MUTACC_NEURON_CLUSTERING_HPP
