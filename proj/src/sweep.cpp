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

#include "mutacc/sweep.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <string>
#include <tuple>

#include "mutacc/error.hpp"
#include "mutacc/random.hpp"
#include "mutacc/results.hpp"

namespace mutacc {
namespace {

using RowKey = std::tuple<Mode, std::string, std::size_t>;

RowKey key_of(const RunResult& r) {
  return {r.mode, format_parameter(r.parameter), r.repetition};
}

/// Loads rows already present and makes the file end on a row boundary.
std::set<RowKey> prepare_results_file(const std::filesystem::path& path) {
  std::set<RowKey> done;
  std::error_code ec;
  if (!std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot create " + path.string());
    out << kResultsHeader << '\n';
    return done;
  }
  auto bytes = read_file(path);
  std::size_t keep = bytes.size();
  while (keep > 0 && bytes[keep - 1] != '\n') --keep;
  if (keep != bytes.size()) {
    std::filesystem::resize_file(path, keep);
    bytes.resize(keep);
  }
  if (keep == 0) {
    std::ofstream out(path, std::ios::trunc);
    out << kResultsHeader << '\n';
    return done;
  }
  for (const auto& row : read_results(path)) done.insert(key_of(row));
  return done;
}

std::vector<Repetition> missing(const std::set<RowKey>& done, Mode mode, double parameter,
                                const std::optional<double>& recorded, std::size_t count,
                                std::uint64_t master) {
  std::vector<Repetition> reps;
  for (std::size_t i = 0; i < count; ++i) {
    if (done.count({mode, format_parameter(recorded), i})) continue;
    reps.push_back({i, derive_seed(master, to_string(mode), parameter, i)});
  }
  return reps;
}

}  // namespace

void validate(const SweepConfig& config) {
  if (config.repetitions < 1 || config.vanilla_repetitions < 1) {
    throw Error(ErrorCode::kInvalidArgument, "repetitions must be >= 1");
  }
  for (Mode mode : config.modes) {
    if (mode == Mode::kNeuron && config.s_grid.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "s-grid must not be empty");
    }
    if (mode == Mode::kMutant && config.p_grid.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "p-grid must not be empty");
    }
  }
  for (std::size_t s : config.s_grid) {
    if (s < 1) throw Error(ErrorCode::kInvalidArgument, "s-grid values must be >= 1");
  }
  for (double p : config.p_grid) {
    if (!(p > 0.0 && p < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "p-grid values must lie in (0, 1)");
    }
  }
}

std::size_t planned_rows(const SweepConfig& config) {
  std::size_t rows = 0;
  for (Mode mode : config.modes) {
    switch (mode) {
      case Mode::kVanilla: rows += config.vanilla_repetitions; break;
      case Mode::kNeuron: rows += config.s_grid.size() * config.repetitions; break;
      case Mode::kMutant: rows += config.p_grid.size() * config.repetitions; break;
    }
  }
  return rows;
}

std::size_t run_sweep(const SweepConfig& config, const Model& model,
                      const LabeledDataset& dataset, const std::filesystem::path& results_path,
                      std::ostream* log) {
  validate(config);
  const MutationTester tester(model, dataset, config.engine);
  const std::set<RowKey> done = prepare_results_file(results_path);
  std::ofstream out(results_path, std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to " + results_path.string());

  std::size_t written = 0;
  const auto emit = [&](const std::vector<RunResult>& rows) {
    for (const auto& row : rows) {
      out << format_row(row) << '\n';
      out.flush();
      if (!out) throw Error(ErrorCode::kIo, "write failed for " + results_path.string());
      ++written;
      if (log) *log << format_row(row) << '\n';
    }
  };

  const auto has = [&](Mode m) {
    return std::find(config.modes.begin(), config.modes.end(), m) != config.modes.end();
  };
  if (has(Mode::kVanilla)) {
    for (const auto& rep : missing(done, Mode::kVanilla, 0.0, std::nullopt,
                                   config.vanilla_repetitions, config.master_seed)) {
      emit(run_vanilla(tester, std::span(&rep, 1)));
    }
  }
  if (has(Mode::kNeuron)) {
    for (std::size_t s : config.s_grid) {
      const auto param = static_cast<double>(s);
      for (const auto& rep : missing(done, Mode::kNeuron, param, param, config.repetitions,
                                     config.master_seed)) {
        emit(run_neuron_mode(tester, s, std::span(&rep, 1)));
      }
    }
  }
  if (has(Mode::kMutant)) {
    for (double p : config.p_grid) {
      for (const auto& rep :
           missing(done, Mode::kMutant, p, p, config.repetitions, config.master_seed)) {
        emit(run_mutant_mode(tester, p, std::span(&rep, 1)));
      }
    }
  }
  return written;
}

}  // namespace mutacc
