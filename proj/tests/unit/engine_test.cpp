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

#include "mutacc/engine.hpp"
#include "mutacc/error.hpp"
#include "mutacc/model_io.hpp"
#include "mutacc/mutant_clustering.hpp"
#include "test_models.hpp"

namespace mutacc {
namespace {

// Identity 2x2 dense layer; classes follow the larger input.
struct TinyCase {
  Model model{{2},
              {Dense{Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero()},
               Activation{ActivationKind::kSoftmax}},
              2};
  LabeledDataset dataset{{2},
                         (Eigen::MatrixXd(2, 4) << 1, 0, 0.2, 2, 0, 1, 0.9, 1).finished(),
                         {0, 1, 0, 0},
                         2};
};

TEST(EngineTest, TinyModelMatchesHandDerivedKills) {
  const TinyCase tc;
  const MutationTester tester(tc.model, tc.dataset);
  EXPECT_EQ(tester.baseline().predicted, (std::vector<std::size_t>{0, 1, 1, 0}));
  EXPECT_DOUBLE_EQ(tester.baseline().accuracy(), 0.75);
  const auto mutants = generate_vanilla_mutants(tc.model);
  const KillRecord kills = tester.test_all(mutants);
  // CW, NB, NI on neuron 0, then on neuron 1.
  const KillRecord expected{{}, {0}, {0}, {}, {1}, {1}};
  EXPECT_EQ(kills, expected);
  EXPECT_DOUBLE_EQ(mutation_score(kills, 6, 2), 4.0 / 12.0);
  const auto runs = run_vanilla(tc.model, tc.dataset, 2);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_DOUBLE_EQ(runs[0].score, 1.0 / 3.0);
  EXPECT_EQ(runs[0].killed_classes, 4u);
  EXPECT_EQ(runs[1].repetition, 1u);
}

TEST(EngineTest, AllPointsMisclassifiedKillsNothing) {
  const TinyCase tc;
  const LabeledDataset wrong({2}, tc.dataset.inputs(), {1, 0, 0, 1}, 2);
  const MutationTester tester(tc.model, wrong);
  EXPECT_DOUBLE_EQ(tester.baseline().accuracy(), 0.0);
  const auto runs = run_vanilla(tc.model, wrong, 1);
  EXPECT_EQ(runs[0].score, 0.0);
  EXPECT_EQ(runs[0].killed_classes, 0u);
}

TEST(EngineTest, ScoreSpeedupAndErrorFormulas) {
  const std::vector<ClassSet> records{{0, 1}, {}, {2}};
  EXPECT_DOUBLE_EQ(mutation_score(records, 3, 4), 3.0 / 12.0);
  EXPECT_THROW(mutation_score(records, 0, 4), Error);
  EXPECT_THROW(mutation_score(records, 3, 0), Error);
  EXPECT_DOUBLE_EQ(speedup(10.0, 4.0), 0.6);
  EXPECT_DOUBLE_EQ(speedup(10.0, 12.0), -0.2);
  EXPECT_DOUBLE_EQ(score_error(0.5, 0.4), 0.2);
  EXPECT_DOUBLE_EQ(score_error(0.5, 0.6), -0.2);
  EXPECT_THROW(speedup(0.0, 1.0), Error);
  EXPECT_THROW(score_error(0.0, 1.0), Error);
}

TEST(EngineTest, ExpandKillsCopiesRepresentativeRecord) {
  const MutantClusterSet set = select_representatives({{0, 2}, {1}, {3, 4}}, 0.5, 3);
  const std::vector<ClassSet> rep{{1}, {}, {0, 2}};
  const KillRecord all = expand_kills(set, rep, 5);
  EXPECT_EQ(all, (KillRecord{{1}, {}, {1}, {0, 2}, {0, 2}}));
  EXPECT_THROW(expand_kills(set, std::span(rep).first(2), 5), Error);
}

TEST(EngineTest, PropertyCachedPrefixScanAndWorkersAgreeWithScratch) {
  Rng rng(70);
  for (int trial = 0; trial < 8; ++trial) {
    const Model m = trial % 2 ? testing::random_convnet(rng) : testing::random_mlp(rng);
    const LabeledDataset ds = testing::labelled_by_model(m, 150 + uniform_index(rng, 200), rng);
    const auto mutants = generate_vanilla_mutants(m);
    const MutationTester full(m, ds, {1, KillScan::kFull});
    const MutationTester quick(m, ds, {1, KillScan::kShortCircuit});
    const MutationTester parallel(m, ds, {4, KillScan::kShortCircuit});
    const KillRecord a = full.test_all(mutants);
    EXPECT_EQ(quick.test_all(mutants), a);
    EXPECT_EQ(parallel.test_all(mutants), a);
    for (const auto& mutant : mutants) {
      const Model mm = materialize(m, mutant.spec);
      const ClassSet scratch = killed_classes(full.baseline(), mm, ds, KillScan::kFull);
      EXPECT_EQ(scratch, a[mutant.id]);
      EXPECT_EQ(killed_classes(full.baseline(), mm, ds, KillScan::kShortCircuit), scratch);
      EXPECT_EQ(full.test(mutant.spec), scratch);
    }
  }
}

TEST(EngineTest, ConvFixtureCachedPrefixAgreesWithScratch) {
  const Model m = load_model(testing::fixture("lenet_small.mutacc"));
  const LabeledDataset ds = load_idx_pair(testing::fixture("lenet_small_images.idx"),
                                          testing::fixture("lenet_small_labels.idx"), 4);
  const MutationTester tester(m, ds);
  const auto mutants = generate_vanilla_mutants(m);
  const KillRecord kills = tester.test_all(mutants);
  for (const auto& mutant : mutants) {
    EXPECT_EQ(kills[mutant.id],
              killed_classes(tester.baseline(), materialize(m, mutant.spec), ds));
  }
}

TEST(EngineTest, PropertyNeuronModeWithSingletonsEqualsVanilla) {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const Model m = testing::random_mlp(rng);
    const LabeledDataset ds = testing::labelled_by_model(m, 60, rng);
    const MutationTester tester(m, ds);
    const auto reps = make_repetitions(1);
    const RunResult v = run_vanilla(tester, reps)[0];
    const RunResult n = run_neuron_mode(tester, 1, reps)[0];
    EXPECT_EQ(n.score, v.score);
    EXPECT_EQ(n.total_mutants, v.total_mutants);
    EXPECT_EQ(n.killed_classes, v.killed_classes);
    ASSERT_TRUE(n.parameter);
    EXPECT_EQ(*n.parameter, 1.0);
    EXPECT_GE(n.cluster_time_s, 0.0);
  }
}

TEST(EngineTest, PropertyMutantModeMatchesDirectRepresentativeOracle) {
  Rng rng(72);
  for (int trial = 0; trial < 6; ++trial) {
    const Model m = testing::random_mlp(rng);
    const LabeledDataset ds = testing::labelled_by_model(m, 80, rng);
    const MutationTester tester(m, ds);
    const auto reps = make_repetitions(3, 17);
    const auto runs = run_mutant_mode(tester, 0.5, reps);
    const MutantPartition partition = partition_mutants(m, 0.5);
    for (std::size_t r = 0; r < reps.size(); ++r) {
      const MutantClusterSet set = select_representatives(partition.clusters, 0.5, reps[r].seed);
      std::size_t killed = 0;
      for (std::size_t c = 0; c < set.clusters.size(); ++c) {
        const Model rep_model = materialize(m, partition.mutants[set.representatives[c]].spec);
        killed += set.clusters[c].size() *
                  killed_classes(tester.baseline(), rep_model, ds).size();
      }
      const double expected = static_cast<double>(killed) /
                              static_cast<double>(partition.mutants.size() * ds.num_classes());
      EXPECT_EQ(runs[r].score, expected);
      EXPECT_EQ(runs[r].tested_mutants, set.clusters.size());
      EXPECT_EQ(runs[r].total_mutants, partition.mutants.size());
      EXPECT_EQ(runs[r].seed, reps[r].seed);
    }
  }
}

TEST(EngineTest, MutantModeAboveEverySimilarityEqualsVanilla) {
  Rng rng(73);
  const Model m = testing::random_mlp(rng);
  const LabeledDataset ds = testing::labelled_by_model(m, 60, rng);
  const MutationTester tester(m, ds);
  const MutantPartition part = partition_mutants(m, 0.5);
  const Eigen::MatrixXd g = similarity_graph(mutant_features(m, part.mutants));
  double max_off = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < g.cols(); ++j) max_off = std::max(max_off, g(i, j));
  }
  const double threshold = std::nextafter(max_off, 1.0);
  ASSERT_LT(threshold, 1.0);
  const auto reps = make_repetitions(1);
  const RunResult mm = run_mutant_mode(tester, threshold, reps)[0];
  const RunResult v = run_vanilla(tester, reps)[0];
  EXPECT_EQ(mm.tested_mutants, v.total_mutants);
  EXPECT_EQ(mm.score, v.score);
}

TEST(EngineTest, RepetitionSeeds) {
  const auto reps = make_repetitions(4, 99);
  ASSERT_EQ(reps.size(), 4u);
  EXPECT_EQ(reps[0].seed, 99u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(reps[i].index, i);
    EXPECT_EQ(reps[i].seed, repetition_seed(99, i));
  }
  EXPECT_NE(reps[1].seed, reps[2].seed);
}

TEST(EngineTest, ModeNames) {
  for (Mode m : {Mode::kVanilla, Mode::kNeuron, Mode::kMutant}) {
    EXPECT_EQ(parse_mode(to_string(m)), m);
  }
  EXPECT_FALSE(parse_mode("bogus"));
}

TEST(EngineTest, CompatibilityChecks) {
  const TinyCase tc;
  EXPECT_NO_THROW(check_compatible(tc.model, tc.dataset));
  const LabeledDataset wide({3}, Eigen::MatrixXd::Zero(3, 2), {0, 1}, 2);
  const LabeledDataset more({2}, Eigen::MatrixXd::Zero(2, 2), {0, 1}, 3);
  for (const auto* ds : {&wide, &more}) {
    try {
      check_compatible(tc.model, *ds);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kIncompatible);
    }
  }
}

}  // namespace
}  // namespace mutacc
