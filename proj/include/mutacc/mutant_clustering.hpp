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

#ifndef MUTACC_MUTANT_CLUSTERING_HPP
#define MUTACC_MUTANT_CLUSTERING_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mutacc/error.hpp"
#include "mutacc/hac.hpp"
#include "mutacc/model.hpp"
#include "mutacc/mutation.hpp"

namespace mutacc {

/// Largest fan-in over the model's mutable layers (K).
std::size_t max_fan_in(const Model& model);

/// Location/parameter descriptor of a single-neuron mutant:
/// [layer, neuron, w_1..w_K (zero padded), bias], using post-mutation values.
/// Length is 2 + K + 1. Throws Error{kInvalidArgument} for multi-neuron targets.
Eigen::VectorXd mutant_feature(const Model& model, const Mutant& mutant);

/// One feature per row, in mutant order.
Eigen::MatrixXd mutant_features(const Model& model, std::span<const Mutant> mutants);

/// 1 / (1 + ||a - b||): 1 for identical vectors, decreasing towards 0.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar similarity(const Eigen::MatrixBase<DerivedA>& a,
                                     const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature lengths differ: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  return Scalar(1) / (Scalar(1) + (a - b).norm());
}

/// Complete similarity graph over the rows of `features` as a dense
/// symmetric matrix with unit diagonal.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> similarity_graph(
    const Eigen::MatrixBase<Derived>& features) {
  using Scalar = typename Derived::Scalar;
  auto d = pairwise_distances(features);
  return (Scalar(1) / (d.array() + Scalar(1))).matrix();
}

/// Average-linkage agglomeration on similarities: repeatedly merges the pair
/// with the highest average inter-cluster similarity while it is >= threshold.
template <typename Derived>
Agglomeration<typename Derived::Scalar> cluster_mutants(
    const Eigen::MatrixBase<Derived>& graph, typename Derived::Scalar threshold) {
  using Scalar = typename Derived::Scalar;
  if (graph.rows() != graph.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "similarity graph must be square");
  }
  if (!(threshold > Scalar(0) && threshold < Scalar(1))) {
    throw Error(ErrorCode::kInvalidArgument, "linkage threshold must lie in (0, 1)");
  }
  return agglomerate_average(graph, Closeness::kLargerIsCloser,
                             [threshold](std::size_t, Scalar best) { return best >= threshold; });
}

struct MutantClusterSet {
  std::vector<std::vector<std::size_t>> clusters;  // mutant ids
  std::vector<std::size_t> representatives;       // one per cluster
  double threshold = 0.0;
  std::uint64_t seed = 0;

  std::size_t mutant_count() const;
};

/// Picks one member per cluster uniformly at random, walking clusters in
/// order. Singleton clusters take their only member without a draw.
MutantClusterSet select_representatives(std::vector<std::vector<std::size_t>> partition,
                                         double threshold, std::uint64_t seed);

/// Text table: cluster id, representative id, member ids.
std::string partition_table(const MutantClusterSet& set);

}  // namespace mutacc

#endif  // MUTACC_MUTANT_CLUSTERING_HPP
