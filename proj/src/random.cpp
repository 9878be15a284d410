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

#include "mutacc/random.hpp"

#include <bit>
#include <limits>

namespace mutacc {

std::size_t uniform_index(Rng& rng, std::size_t bound) {
  const auto n = static_cast<std::uint64_t>(bound);
  // Largest multiple of n that fits; draws at or above it are rejected.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return static_cast<std::size_t>(draw % n);
}

double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t repetition_seed(std::uint64_t seed, std::size_t rep) {
  return rep == 0 ? seed : splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(rep)));
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view mode, double parameter,
                          std::size_t repetition) {
  // FNV-1a over the mode name keeps the mapping stable across builds.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : mode) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t x = splitmix64(master);
  x = splitmix64(x ^ h);
  x = splitmix64(x ^ std::bit_cast<std::uint64_t>(parameter));
  x = splitmix64(x ^ static_cast<std::uint64_t>(repetition));
  return x;
}

}  // namespace mutacc
