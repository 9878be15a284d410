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

#include <gtest/gtest.h>

#include "mutacc/error.hpp"
#include "mutacc/model_io.hpp"
#include "mutacc/mutation.hpp"
#include "mutacc/neuron_clustering.hpp"
#include "test_models.hpp"

namespace mutacc {
namespace {

std::size_t total_neurons(const Model& m) {
  std::size_t n = 0;
  for (const auto& ml : mutable_layers(m)) n += ml.neuron_count;
  return n;
}

TEST(OperatorTest, SemanticsOnKnownVector) {
  const Eigen::VectorXd v = (Eigen::VectorXd(3) << 2.0, -1.0, 0.5).finished();
  EXPECT_EQ(mutate_params(Mutator::change_weights(0.1), v),
            (Eigen::VectorXd(3) << 2.0 * 1.1, -1.0 * 1.1, 0.5 * 1.1).finished());
  EXPECT_EQ(mutate_params(Mutator::block(), v), Eigen::VectorXd::Zero(3));
  EXPECT_EQ(mutate_params(Mutator::inverse(), v), (-v).eval());
}

TEST(OperatorTest, PropertyInverseIsInvolutionAndBlockIdempotent) {
  Rng rng(40);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd v = testing::random_matrix(1 + static_cast<Eigen::Index>(uniform_index(rng, 12)), 1, rng, 5.0);
    const Mutator inv = Mutator::inverse(), blk = Mutator::block();
    EXPECT_EQ(mutate_params(inv, mutate_params(inv, v)), v);
    EXPECT_EQ(mutate_params(blk, mutate_params(blk, v)), mutate_params(blk, v));
    const double p = 0.05 + 0.9 * uniform_unit(rng);
    const Eigen::VectorXd cw = mutate_params(Mutator::change_weights(p), v);
    for (Eigen::Index i = 0; i < v.size(); ++i) EXPECT_DOUBLE_EQ(cw[i], v[i] * (1.0 + p));
  }
}

TEST(MaterializeTest, PropertyOnlyTargetedNeuronsChange) {
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const Model m = trial % 3 == 0 ? testing::random_convnet(rng) : testing::random_mlp(rng);
    const auto layers = mutable_layers(m);
    const auto& ml = layers[uniform_index(rng, layers.size())];
    std::vector<std::size_t> neurons;
    for (std::size_t n = 0; n < ml.neuron_count; ++n) {
      if (uniform_index(rng, 2) || (n + 1 == ml.neuron_count && neurons.empty())) neurons.push_back(n);
    }
    const Mutator op = std::array{Mutator::change_weights(), Mutator::block(),
                                  Mutator::inverse()}[uniform_index(rng, 3)];
    const MutationSpec spec{op, {ml.layer_idx, neurons}};
    const Model snapshot = m;
    const Model mutated = materialize(m, spec);
    for (const auto& other : layers) {
      for (std::size_t n = 0; n < other.neuron_count; ++n) {
        const Eigen::VectorXd before = m.neuron_params(other.layer_idx, n);
        const Eigen::VectorXd after = mutated.neuron_params(other.layer_idx, n);
        const bool targeted = other.layer_idx == ml.layer_idx &&
                              std::find(neurons.begin(), neurons.end(), n) != neurons.end();
        if (targeted) {
          EXPECT_EQ(after, mutate_params(op, before));
        } else {
          EXPECT_EQ(after, before);
        }
      }
    }
    // The source model is untouched.
    for (std::size_t n : neurons) {
      EXPECT_EQ(m.neuron_params(ml.layer_idx, n), snapshot.neuron_params(ml.layer_idx, n));
    }
  }
}

TEST(MaterializeTest, InvalidSpecs) {
  Rng rng(42);
  const Model m = testing::random_mlp(rng, 3, 2);
  const auto layers = mutable_layers(m);
  const std::size_t l = layers[0].layer_idx;
  auto code = [&](const MutationSpec& spec) {
    try {
      validate_spec(m, spec);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kParse;
  };
  EXPECT_EQ(code({Mutator::block(), {0, {0}}}), ErrorCode::kNotMutable);  // flatten
  EXPECT_EQ(code({Mutator::block(), {l, {layers[0].neuron_count}}}), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(code({Mutator::block(), {l, {}}}), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code({Mutator::block(), {99, {0}}}), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(code({Mutator::change_weights(-1.0), {l, {0}}}), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code({Mutator::change_weights(0.0), {l, {0}}}), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code({Mutator::block(), {l, {0}}}), ErrorCode::kParse);  // valid
  EXPECT_THROW(materialize(m, {Mutator::block(), {l, {layers[0].neuron_count}}}), Error);
}

TEST(VanillaTest, ReferenceFcnnHasFourHundredEightyMutants) {
  Rng rng(1);
  const Model m = testing::fcnn_architecture(rng);
  const auto mutants = generate_vanilla_mutants(m);
  ASSERT_EQ(mutants.size(), 480u);
  EXPECT_EQ(mutants[0].spec, (MutationSpec{Mutator::change_weights(), {1, {0}}}));
  EXPECT_EQ(mutants[1].spec.mutator, Mutator::block());
  EXPECT_EQ(mutants[2].spec.mutator, Mutator::inverse());
  EXPECT_EQ(mutants[3].spec.target, (TargetGroup{1, {1}}));
  EXPECT_EQ(mutants.back().spec, (MutationSpec{Mutator::inverse(), {7, {9}}}));
}

TEST(VanillaTest, PropertyCountIsThreeTimesNeuronsAndOrdered) {
  Rng rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    const Model m = trial % 2 ? testing::random_convnet(rng) : testing::random_mlp(rng);
    const auto mutants = generate_vanilla_mutants(m, 0.25);
    ASSERT_EQ(mutants.size(), 3 * total_neurons(m));
    for (std::size_t i = 0; i < mutants.size(); ++i) {
      EXPECT_EQ(mutants[i].id, i);
      EXPECT_EQ(mutants[i].spec.mutator.op, kOperatorOrder[i % 3]);
      EXPECT_EQ(mutants[i].spec.target.neurons.size(), 1u);
      EXPECT_NO_THROW(validate_spec(m, mutants[i].spec));
      if (mutants[i].spec.mutator.op == Operator::kChangeWeights) {
        EXPECT_EQ(mutants[i].spec.mutator.fraction, 0.25);
      }
      if (i >= 3) {
        const auto& prev = mutants[i - 3].spec.target;
        const auto& cur = mutants[i].spec.target;
        EXPECT_TRUE(prev.layer_idx < cur.layer_idx ||
                    (prev.layer_idx == cur.layer_idx && prev.neurons[0] < cur.neurons[0]));
      }
    }
  }
}

TEST(VanillaTest, NoMutableLayers) {
  const Model m({3}, {Activation{ActivationKind::kSoftmax}}, 3);
  try {
    generate_vanilla_mutants(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoMutableLayers);
  }
}

TEST(ClusterMutantsTest, PropertyCountIsThreeTimesClusterSum) {
  Rng rng(44);
  for (int trial = 0; trial < 40; ++trial) {
    const Model m = trial % 2 ? testing::random_convnet(rng) : testing::random_mlp(rng);
    const std::size_t s = 1 + uniform_index(rng, 10);
    const NeuronClustering nc = cluster_model(m, s);
    std::size_t expected = 0;
    for (const auto& ml : mutable_layers(m)) expected += target_cluster_count(ml.neuron_count, s);
    EXPECT_EQ(nc.total_clusters(), expected);
    const auto mutants = generate_cluster_mutants(m, nc);
    ASSERT_EQ(mutants.size(), 3 * expected);
    std::size_t i = 0;
    for (const auto& layer : nc.layers) {
      for (const auto& cluster : layer.clusters) {
        for (Operator op : kOperatorOrder) {
          EXPECT_EQ(mutants[i].id, i);
          EXPECT_EQ(mutants[i].spec.mutator.op, op);
          EXPECT_EQ(mutants[i].spec.target, (TargetGroup{layer.layer_idx, cluster}));
          ++i;
        }
      }
    }
  }
}

TEST(ClusterMutantsTest, SingletonClusteringEqualsVanilla) {
  Rng rng(45);
  const Model m = testing::random_mlp(rng);
  const auto a = generate_vanilla_mutants(m);
  const auto b = generate_cluster_mutants(m, cluster_model(m, 1));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].spec, b[i].spec);
}

TEST(ClusterMutantsTest, RejectsForeignClustering) {
  Rng rng(46);
  const Model a = testing::random_mlp(rng, 4, 2);
  NeuronClustering nc = cluster_model(a, 2);
  nc.layers[0].clusters.back().push_back(999);
  try {
    generate_cluster_mutants(a, nc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kClusteringMismatch);
  }
}

}  // namespace
}  // namespace mutacc
