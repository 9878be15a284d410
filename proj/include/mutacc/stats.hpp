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

#ifndef MUTACC_STATS_HPP
#define MUTACC_STATS_HPP

#include <span>

namespace mutacc {

struct MannWhitneyResult {
  double u;        // statistic for the first sample
  double p_value;  // two-sided
  double z;
};

/// Mann-Whitney U via rank sums with midranks for ties. The p-value uses the
/// normal approximation with tie and continuity corrections.
MannWhitneyResult mann_whitney_u(std::span<const double> sample_a,
                                 std::span<const double> sample_b);

}  // namespace mutacc

#endif  // MUTACC_STATS_HPP
