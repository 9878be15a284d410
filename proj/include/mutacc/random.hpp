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

#ifndef MUTACC_RANDOM_HPP
#define MUTACC_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace mutacc {

/// mt19937_64 is fully specified by the standard; the distributions are not,
/// so bounded draws go through uniform_index below.
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection sampling. bound must be > 0.
std::size_t uniform_index(Rng& rng, std::size_t bound);

/// Uniform real in [0, 1) from the top 53 bits of one draw.
double uniform_unit(Rng& rng);

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for repetition `rep` of a run started with `seed`; rep 0 keeps it.
std::uint64_t repetition_seed(std::uint64_t seed, std::size_t rep);

/// Pure function of (master seed, mode, parameter, repetition).
std::uint64_t derive_seed(std::uint64_t master, std::string_view mode, double parameter,
                          std::size_t repetition);

}  // namespace mutacc

#endif  // MUTACC_RANDOM_HPP
