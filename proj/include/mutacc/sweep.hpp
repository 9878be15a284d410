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

#ifndef MUTACC_SWEEP_HPP
#define MUTACC_SWEEP_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mutacc/dataset.hpp"
#include "mutacc/engine.hpp"
#include "mutacc/model.hpp"

namespace mutacc {

struct SweepConfig {
  std::vector<Mode> modes = {Mode::kVanilla, Mode::kNeuron, Mode::kMutant};
  std::vector<std::size_t> s_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> p_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
  std::size_t repetitions = 6;
  std::size_t vanilla_repetitions = 30;
  std::uint64_t master_seed = 0;
  EngineOptions engine;
};

/// Throws Error{kInvalidArgument} for empty grids, zero repetitions or
/// out-of-range parameters.
void validate(const SweepConfig& config);

/// Expected row count of a complete sweep.
std::size_t planned_rows(const SweepConfig& config);

/// Runs every (mode, parameter, repetition) missing from `results_path`,
/// appending one flushed row per run. Each run is seeded with
/// derive_seed(master_seed, mode, parameter, repetition); vanilla uses
/// parameter 0. An unterminated trailing line left by an interrupted run is
/// dropped. Returns the number of rows written.
std::size_t run_sweep(const SweepConfig& config, const Model& model,
                      const LabeledDataset& dataset, const std::filesystem::path& results_path,
                      std::ostream* log = nullptr);

}  // namespace mutacc

#endif  // MUTACC_SWEEP_HPP
