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

#ifndef MUTACC_HAC_HPP
#define MUTACC_HAC_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace mutacc {

/// One agglomeration step. Clusters are named by their smallest member, so
/// `first < second` and the merged cluster keeps the name `first`.
template <typename Scalar>
struct MergeStep {
  std::size_t step;
  std::size_t first;
  std::size_t second;
  Scalar proximity;
  std::size_t merged_size;
};

template <typename Scalar>
struct Agglomeration {
  /// Members ascending; clusters ordered by smallest member.
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<MergeStep<Scalar>> merges;
};

enum class Closeness {
  kSmallerIsCloser,  // distances
  kLargerIsCloser,   // similarities
};

namespace detail {

/// Average-linkage update of the proximity between C and A∪B, given
/// x = prox(A, C), y = prox(B, C). Written relative to the value closer to
/// the merge so the result can never overtake it, which keeps the merge
/// sequence exactly monotone in floating point.
template <typename Scalar>
Scalar average_update(Scalar x, std::size_t size_x, Scalar y, std::size_t size_y,
                      Closeness closeness) {
  const Scalar total = static_cast<Scalar>(size_x + size_y);
  const bool x_closer = closeness == Closeness::kSmallerIsCloser ? x <= y : x >= y;
  const Scalar near = x_closer ? x : y;
  const Scalar far = x_closer ? y : x;
  const Scalar far_weight = static_cast<Scalar>(x_closer ? size_y : size_x) / total;
  return near + (far - near) * far_weight;
}

}  // namespace detail

/// Sequential average-linkage agglomerative clustering over a symmetric
/// proximity matrix. Starting from singletons, merges the closest pair
/// while `keep_going(active_cluster_count, best_proximity)` holds. Ties go to
/// the lexicographically smallest (first, second) pair of cluster names.
/// O(n^3) time, O(n^2) memory.
template <typename Derived, typename KeepGoing>
Agglomeration<typename Derived::Scalar> agglomerate_average(
    const Eigen::MatrixBase<Derived>& proximity, Closeness closeness, KeepGoing keep_going) {
  using Scalar = typename Derived::Scalar;
  const auto n = static_cast<std::size_t>(proximity.rows());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> prox = proximity;

  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), std::size_t{0});

  const auto closer = [closeness](Scalar a, Scalar b) {
    return closeness == Closeness::kSmallerIsCloser ? a < b : a > b;
  };

  Agglomeration<Scalar> result;
  while (active.size() > 1) {
    std::size_t best_a = 0, best_b = 0;
    Scalar best{};
    bool found = false;
    for (std::size_t ai = 0; ai < active.size(); ++ai) {
      for (std::size_t bi = ai + 1; bi < active.size(); ++bi) {
        const Scalar v = prox(static_cast<Eigen::Index>(active[ai]),
                              static_cast<Eigen::Index>(active[bi]));
        if (!found || closer(v, best)) {
          best = v;
          best_a = ai;
          best_b = bi;
          found = true;
        }
      }
    }
    if (!keep_going(active.size(), best)) break;

    const std::size_t a = active[best_a];
    const std::size_t b = active[best_b];
    const std::size_t size_a = members[a].size();
    const std::size_t size_b = members[b].size();
    for (std::size_t c : active) {
      if (c == a || c == b) continue;
      const auto ia = static_cast<Eigen::Index>(a);
      const auto ib = static_cast<Eigen::Index>(b);
      const auto ic = static_cast<Eigen::Index>(c);
      const Scalar merged =
          detail::average_update(prox(ia, ic), size_a, prox(ib, ic), size_b, closeness);
      prox(ia, ic) = merged;
      prox(ic, ia) = merged;
    }
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    std::sort(members[a].begin(), members[a].end());
    members[b].clear();
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    result.merges.push_back({result.merges.size(), a, b, best, members[a].size()});
  }

  for (std::size_t c : active) result.clusters.push_back(std::move(members[c]));
  return result;
}

/// Euclidean distances between the rows of `features`, computed from
/// explicit differences (no Gram-matrix shortcut).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> pairwise_distances(
    const Eigen::MatrixBase<Derived>& features) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = features.rows();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cols = features.transpose();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar v = (cols.col(i) - cols.col(j)).norm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

}  // namespace mutacc

#endif  // MUTACC_HAC_HPP
