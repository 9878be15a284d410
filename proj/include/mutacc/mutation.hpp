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

#ifndef MUTACC_MUTATION_HPP
#define MUTACC_MUTATION_HPP

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "mutacc/model.hpp"

namespace mutacc {

struct NeuronClustering;

enum class Operator { kChangeWeights, kNeuronBlock, kNeuronInverse };

/// Generation order; mutant ids follow it within each target.
inline constexpr std::array<Operator, 3> kOperatorOrder = {
    Operator::kChangeWeights, Operator::kNeuronBlock, Operator::kNeuronInverse};

inline constexpr double kDefaultChangeFraction = 0.1;

std::string_view to_string(Operator op);

struct Mutator {
  Operator op = Operator::kChangeWeights;
  /// Only used by kChangeWeights: every targeted value v becomes v * (1 + fraction).
  double fraction = kDefaultChangeFraction;

  static Mutator change_weights(double fraction = kDefaultChangeFraction) {
    return {Operator::kChangeWeights, fraction};
  }
  static Mutator block() { return {Operator::kNeuronBlock, 0.0}; }
  static Mutator inverse() { return {Operator::kNeuronInverse, 0.0}; }

  bool operator==(const Mutator&) const = default;
};

struct TargetGroup {
  std::size_t layer_idx = 0;
  std::vector<std::size_t> neurons;  // ascending, distinct, nonempty

  bool operator==(const TargetGroup&) const = default;
};

struct MutationSpec {
  Mutator mutator;
  TargetGroup target;

  bool operator==(const MutationSpec&) const = default;
};

struct Mutant {
  std::size_t id = 0;
  MutationSpec spec;
};

/// Throws Error{kInvalidArgument, kNotMutable, kIndexOutOfRange} when the
/// spec does not fit the model.
void validate_spec(const Model& model, const MutationSpec& spec);

/// Three mutants per neuron of every mutable layer, ordered by layer, then
/// neuron, then kOperatorOrder. Ids run 0..N-1.
std::vector<Mutant> generate_vanilla_mutants(const Model& model,
                                             double change_fraction = kDefaultChangeFraction);

/// Three mutants per neuron cluster, ordered by layer, then cluster, then
/// kOperatorOrder.
std::vector<Mutant> generate_cluster_mutants(const Model& model,
                                             const NeuronClustering& clustering,
                                             double change_fraction = kDefaultChangeFraction);

/// Transformed parameter vector (weights then bias) of one targeted neuron.
Eigen::VectorXd mutate_params(const Mutator& mutator, const Eigen::VectorXd& params);

/// Deep copy of `model` with the spec applied to every targeted neuron.
Model materialize(const Model& model, const MutationSpec& spec);

}  // namespace mutacc

#endif  // MUTACC_MUTATION_HPP
