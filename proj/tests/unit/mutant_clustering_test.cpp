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

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "mutacc/error.hpp"
#include "mutacc/mutant_clustering.hpp"
#include "mutacc/mutation.hpp"
#include "test_models.hpp"

namespace mutacc {
namespace {

using Partition = std::vector<std::vector<std::size_t>>;

// Every cluster of `fine` lies inside one cluster of `coarse`.
bool refines(const Partition& fine, const Partition& coarse) {
  for (const auto& f : fine) {
    const auto home = std::find_if(coarse.begin(), coarse.end(), [&](const auto& c) {
      return std::find(c.begin(), c.end(), f[0]) != c.end();
    });
    if (home == coarse.end()) return false;
    for (auto x : f) {
      if (std::find(home->begin(), home->end(), x) == home->end()) return false;
    }
  }
  return true;
}

// Reference: recompute average similarities from the raw graph each step.
Partition naive_similarity_linkage(const Eigen::MatrixXd& g, double threshold) {
  Partition clusters;
  for (Eigen::Index i = 0; i < g.rows(); ++i) clusters.push_back({static_cast<std::size_t>(i)});
  while (clusters.size() > 1) {
    double best = -1.0;
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double sum = 0.0;
        for (auto i : clusters[a]) {
          for (auto j : clusters[b]) sum += g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
        const double avg = sum / static_cast<double>(clusters[a].size() * clusters[b].size());
        if (avg > best) {
          best = avg;
          ba = a;
          bb = b;
        }
      }
    }
    if (best < threshold) break;
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    std::sort(clusters[ba].begin(), clusters[ba].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
  }
  return clusters;
}

TEST(SimilarityTest, KnownValues) {
  const Eigen::Vector2d a(0, 0), b(3, 4);
  EXPECT_DOUBLE_EQ(similarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(similarity(a, b), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(similarity(b, a), similarity(a, b));
  EXPECT_THROW(similarity(Eigen::VectorXd(a), Eigen::VectorXd::Zero(3)), Error);
}

TEST(SimilarityTest, PropertyRangeSymmetryUnitDiagonal) {
  Rng rng(60);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + uniform_index(rng, 15));
    const Eigen::MatrixXd f = testing::random_matrix(n, 4, rng, 2.0);
    const Eigen::MatrixXd g = similarity_graph(f);
    for (Eigen::Index i = 0; i < n; ++i) {
      EXPECT_EQ(g(i, i), 1.0);
      for (Eigen::Index j = 0; j < n; ++j) {
        EXPECT_EQ(g(i, j), g(j, i));
        EXPECT_GT(g(i, j), 0.0);
        EXPECT_LE(g(i, j), 1.0);
        EXPECT_NEAR(g(i, j), similarity(f.row(i), f.row(j)), 1e-15);
      }
    }
  }
}

TEST(MutantFeatureTest, LayoutIsLayerNeuronPaddedWeightsBias) {
  // Layer 1 has fan-in 3, layer 3 has fan-in 2, so K = 3.
  Eigen::MatrixXd w1(2, 3), w2(2, 2);
  w1 << 1, 2, 3, 4, 5, 6;
  w2 << 7, 8, 9, 10;
  const Model m({3},
                {Flatten{}, Dense{w1, Eigen::Vector2d(0.5, -0.5)}, Activation{ActivationKind::kRelu},
                 Dense{w2, Eigen::Vector2d(1.5, 2.5)}, Activation{ActivationKind::kSoftmax}},
                2);
  EXPECT_EQ(max_fan_in(m), 3u);
  const Mutant first{0, {Mutator::change_weights(0.5), {1, {1}}}};
  EXPECT_EQ(mutant_feature(m, first),
            (Eigen::VectorXd(6) << 1, 1, 6.0, 7.5, 9.0, -0.75).finished());
  const Mutant second{1, {Mutator::inverse(), {3, {0}}}};
  EXPECT_EQ(mutant_feature(m, second), (Eigen::VectorXd(6) << 3, 0, -7, -8, 0, -1.5).finished());
  const Mutant blocked{2, {Mutator::block(), {3, {1}}}};
  EXPECT_EQ(mutant_feature(m, blocked), (Eigen::VectorXd(6) << 3, 1, 0, 0, 0, 0).finished());
  const Mutant group{3, {Mutator::block(), {3, {0, 1}}}};
  EXPECT_THROW(mutant_feature(m, group), Error);

  const std::vector<Mutant> all{first, second, blocked};
  const Eigen::MatrixXd rows = mutant_features(m, all);
  ASSERT_EQ(rows.rows(), 3);
  EXPECT_EQ(rows.row(1).transpose(), mutant_feature(m, second));
}

TEST(MutantClusteringTest, TwoObviousPairs) {
  const Eigen::MatrixXd f = (Eigen::MatrixXd(4, 1) << 0.0, 0.1, 10.0, 10.1).finished();
  const Eigen::MatrixXd g = similarity_graph(f);
  EXPECT_NEAR(g(0, 1), 1.0 / 1.1, 1e-12);
  const auto result = cluster_mutants(g, 0.5);
  EXPECT_EQ(result.clusters, (Partition{{0, 1}, {2, 3}}));
  EXPECT_EQ(cluster_mutants(g, 0.95).clusters, (Partition{{0}, {1}, {2}, {3}}));
  EXPECT_EQ(cluster_mutants(g, 0.05).clusters, (Partition{{0, 1, 2, 3}}));
}

TEST(MutantClusteringTest, ThresholdOutsideOpenIntervalRejected) {
  const Eigen::MatrixXd g = Eigen::MatrixXd::Ones(2, 2);
  for (double bad : {0.0, 1.0, -0.2, 1.5}) EXPECT_THROW(cluster_mutants(g, bad), Error);
  EXPECT_THROW(cluster_mutants(Eigen::MatrixXd::Ones(2, 3), 0.5), Error);
}

TEST(MutantClusteringTest, PropertyMatchesOracleAndRefinesAsThresholdRises) {
  Rng rng(61);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<Eigen::Index>(1 + uniform_index(rng, 25));
    const Eigen::MatrixXd g = similarity_graph(testing::random_matrix(n, 3, rng, 2.0));
    Partition previous;
    double previous_threshold = 0.0;
    for (double p : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99}) {
      const auto result = cluster_mutants(g, p);
      EXPECT_EQ(result.clusters, naive_similarity_linkage(g, p));
      for (const auto& m : result.merges) EXPECT_GE(m.proximity, p);
      for (std::size_t i = 1; i < result.merges.size(); ++i) {
        EXPECT_GE(result.merges[i - 1].proximity, result.merges[i].proximity);
      }
      if (!previous.empty()) {
        EXPECT_TRUE(refines(result.clusters, previous)) << previous_threshold << " -> " << p;
        EXPECT_GE(result.clusters.size(), previous.size());
      }
      previous = result.clusters;
      previous_threshold = p;
    }
  }
}

TEST(RepresentativeTest, SingletonsNeedNoDrawAndMembersAreChosen) {
  const Partition p{{0}, {1, 2, 3}, {4}, {5, 6}};
  const MutantClusterSet set = select_representatives(p, 0.4, 9);
  EXPECT_EQ(set.mutant_count(), 7u);
  ASSERT_EQ(set.representatives.size(), 4u);
  EXPECT_EQ(set.representatives[0], 0u);
  EXPECT_EQ(set.representatives[2], 4u);
  EXPECT_TRUE(set.representatives[1] >= 1 && set.representatives[1] <= 3);
  EXPECT_TRUE(set.representatives[3] >= 5 && set.representatives[3] <= 6);
  EXPECT_EQ(select_representatives(p, 0.4, 9).representatives, set.representatives);
  EXPECT_THROW(select_representatives({{0}, {}}, 0.4, 1), Error);
  const std::string table = partition_table(set);
  EXPECT_NE(table.find("1\t" + std::to_string(set.representatives[1]) + "\t1 2 3"), std::string::npos);
}

TEST(RepresentativeTest, TwoMemberClusterIsFair) {
  int first = 0;
  const int draws = 10000;
  for (int seed = 0; seed < draws; ++seed) {
    first += select_representatives({{10, 11}}, 0.5, static_cast<std::uint64_t>(seed))
                 .representatives[0] == 10;
  }
  EXPECT_NEAR(first / static_cast<double>(draws), 0.5, 0.02);
}

TEST(RepresentativeTest, LargerClusterIsUniform) {
  std::vector<int> hits(5, 0);
  const int draws = 10000;
  for (int seed = 0; seed < draws; ++seed) {
    ++hits[select_representatives({{0, 1, 2, 3, 4}}, 0.5, static_cast<std::uint64_t>(seed))
               .representatives[0]];
  }
  for (int h : hits) EXPECT_NEAR(h / static_cast<double>(draws), 0.2, 0.02);
}

}  // namespace
}  // namespace mutacc
