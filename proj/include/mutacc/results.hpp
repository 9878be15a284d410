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

#ifndef MUTACC_RESULTS_HPP
#define MUTACC_RESULTS_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mutacc/engine.hpp"
#include "mutacc/stats.hpp"

namespace mutacc {

inline constexpr std::string_view kResultsHeader =
    "mode,parameter,repetition,seed,total_mutants,tested_mutants,score,test_time_s,"
    "cluster_time_s,killed_classes";

/// Shortest text that parses back to the same double.
std::string format_number(double value);
/// Empty for vanilla rows.
std::string format_parameter(const std::optional<double>& parameter);

std::string format_row(const RunResult& row);

struct ParsedResults {
  std::vector<RunResult> rows;
  std::vector<std::size_t> bad_lines;  // 1-based line numbers
};

/// Parses a results document. The header line is required; malformed rows
/// are reported by line number instead of throwing.
ParsedResults parse_results(std::string_view text);

/// Reads and parses a results file. Throws Error{kParse} listing bad lines.
std::vector<RunResult> read_results(const std::filesystem::path& path);

struct SummaryRow {
  Mode mode = Mode::kVanilla;
  std::optional<double> parameter;
  std::size_t runs = 0;
  double mean_score = 0.0;
  double mean_time_s = 0.0;
  std::optional<double> speedup;      // vs. mean vanilla time
  std::optional<double> score_error;  // vs. mean vanilla score
  double mean_tested = 0.0;
  double mean_total = 0.0;
};

/// One row per (mode, parameter): vanilla first, then neuron and mutant by
/// ascending parameter. Speedup and error use the vanilla means of the same
/// rows (ratio of means).
std::vector<SummaryRow> summarize(const std::vector<RunResult>& rows);

struct SpeedupComparison {
  double neuron_parameter;
  double mutant_parameter;
  std::size_t neuron_samples;
  std::size_t mutant_samples;
  MannWhitneyResult test;
};

/// Pairs the i-th smallest neuron parameter with the i-th smallest mutant
/// threshold and compares their per-run speedups. Empty without vanilla rows.
std::vector<SpeedupComparison> compare_speedups(const std::vector<RunResult>& rows);

std::string format_summary(const std::vector<SummaryRow>& summary);
std::string format_comparisons(const std::vector<SpeedupComparison>& comparisons);

}  // namespace mutacc

#endif  // MUTACC_RESULTS_HPP
