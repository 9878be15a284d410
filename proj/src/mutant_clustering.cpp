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

#include "mutacc/mutant_clustering.hpp"

#include <algorithm>
#include <sstream>

#include "mutacc/model_io.hpp"
#include "mutacc/random.hpp"

namespace mutacc {

std::size_t max_fan_in(const Model& model) {
  std::size_t k = 0;
  for (const auto& layer : model.layers()) k = std::max(k, fan_in(layer));
  return k;
}

Eigen::VectorXd mutant_feature(const Model& model, const Mutant& mutant) {
  const auto& target = mutant.spec.target;
  if (target.neurons.size() != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "mutant " + std::to_string(mutant.id) +
                    " targets several neurons; features need single-neuron mutants");
  }
  validate_spec(model, mutant.spec);
  const std::size_t k = max_fan_in(model);
  const std::size_t neuron = target.neurons.front();
  const Eigen::VectorXd params =
      mutate_params(mutant.spec.mutator, model.neuron_params(target.layer_idx, neuron));
  const Eigen::Index fan = params.size() - 1;

  Eigen::VectorXd feature = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k + 3));
  feature[0] = static_cast<double>(target.layer_idx);
  feature[1] = static_cast<double>(neuron);
  feature.segment(2, fan) = params.head(fan);
  feature[feature.size() - 1] = params[fan];
  return feature;
}

Eigen::MatrixXd mutant_features(const Model& model, std::span<const Mutant> mutants) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(mutants.size()),
                       static_cast<Eigen::Index>(max_fan_in(model) + 3));
  for (std::size_t i = 0; i < mutants.size(); ++i) {
    rows.row(static_cast<Eigen::Index>(i)) = mutant_feature(model, mutants[i]).transpose();
  }
  return rows;
}

std::size_t MutantClusterSet::mutant_count() const {
  std::size_t n = 0;
  for (const auto& c : clusters) n += c.size();
  return n;
}

MutantClusterSet select_representatives(std::vector<std::vector<std::size_t>> partition,
                                         double threshold, std::uint64_t seed) {
  MutantClusterSet out;
  out.threshold = threshold;
  out.seed = seed;
  Rng rng(seed);
  for (const auto& cluster : partition) {
    if (cluster.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "partition contains an empty cluster");
    }
    out.representatives.push_back(
        cluster.size() == 1 ? cluster.front() : cluster[uniform_index(rng, cluster.size())]);
  }
  out.clusters = std::move(partition);
  return out;
}

std::string partition_table(const MutantClusterSet& set) {
  std::ostringstream os;
  os << "cluster\trepresentative\tmembers\n";
  for (std::size_t c = 0; c < set.clusters.size(); ++c) {
    os << c << '\t' << set.representatives[c] << '\t';
    for (std::size_t i = 0; i < set.clusters[c].size(); ++i) {
      os << (i ? " " : "") << set.clusters[c][i];
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace mutacc
