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

#include "mutacc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "mutacc/dataset.hpp"
#include "mutacc/engine.hpp"
#include "mutacc/error.hpp"
#include "mutacc/model_io.hpp"
#include "mutacc/neuron_clustering.hpp"
#include "mutacc/random.hpp"
#include "mutacc/results.hpp"
#include "mutacc/sweep.hpp"

namespace mutacc {
namespace {

namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonArgs {
  std::string model;
  std::string images;
  std::string labels;
  std::size_t classes = 0;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::size_t subset = 0;  // 0 = whole dataset
  std::uint64_t seed = 0;
  std::size_t reps = 6;
  std::size_t vanilla_reps = 30;
  std::string out;
};

std::string default_out_dir() {
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  return "mutacc-out";
}

void add_common(CLI::App& cmd, CommonArgs& args) {
  cmd.add_option("--model", args.model, "Model file")->required();
  cmd.add_option("--images", args.images, "IDX image file")->required();
  cmd.add_option("--labels", args.labels, "IDX label file")->required();
  cmd.add_option("--classes", args.classes, "Number of classes")->required();
  cmd.add_option("--workers", args.workers, "Parallel mutant evaluations")->capture_default_str();
  cmd.add_option("--subset", args.subset, "Use k records sampled with --seed (0 = all)");
  cmd.add_option("--seed", args.seed, "Master seed")->capture_default_str();
  cmd.add_option("--reps", args.reps, "Repetitions per parameter")->capture_default_str();
  cmd.add_option("--vanilla-reps", args.vanilla_reps, "Vanilla repetitions")
      ->capture_default_str();
  cmd.add_option("--out", args.out, "Output directory (default $" + std::string(kOutDirEnv) + ")");
}

double parse_number(const std::string& text, const char* flag) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(flag) + ": '" + text + "' is not a number");
  }
}

std::size_t checked_s(double v, const char* flag) {
  if (!(v >= 1.0) || std::floor(v) != v || v > 1e9) {
    throw ConfigError(std::string(flag) + ": neurons per cluster must be an integer >= 1, got " +
                      format_number(v));
  }
  return static_cast<std::size_t>(v);
}

double checked_threshold(double v, const char* flag) {
  if (!(v > 0.0 && v < 1.0)) {
    throw ConfigError(std::string(flag) + ": linkage threshold must lie in (0, 1), got " +
                      format_number(v));
  }
  return v;
}

void check_common(const CommonArgs& args) {
  if (args.classes < 1) throw ConfigError("--classes must be >= 1");
  if (args.workers < 1) throw ConfigError("--workers must be >= 1");
  if (args.reps < 1) throw ConfigError("--reps must be >= 1");
  if (args.vanilla_reps < 1) throw ConfigError("--vanilla-reps must be >= 1");
}

struct Inputs {
  Model model;
  LabeledDataset dataset;
};

Inputs load_inputs(const CommonArgs& args) {
  Model model = load_model(args.model);
  LabeledDataset data = load_idx_pair(args.images, args.labels, args.classes);
  if (args.subset > 0) {
    if (args.subset > data.size()) {
      throw ConfigError("--subset " + std::to_string(args.subset) + " exceeds dataset size " +
                        std::to_string(data.size()));
    }
    data = subset(data, args.subset, args.seed);
  }
  check_compatible(model, data);
  return {std::move(model), std::move(data)};
}

fs::path output_dir(const CommonArgs& args) {
  fs::path dir = args.out.empty() ? fs::path(default_out_dir()) : fs::path(args.out);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::trunc);
  f << text;
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

int analyze(const CommonArgs& args, const std::string& mode_text,
            const std::optional<std::string>& param_text, bool dump, std::ostream& out) {
  check_common(args);
  const Mode mode = *parse_mode(mode_text);
  std::size_t s = 0;
  double threshold = 0.0;
  if (mode != Mode::kVanilla) {
    if (!param_text) {
      throw ConfigError("--param is required for mode " + mode_text);
    }
    const double v = parse_number(*param_text, "--param");
    if (mode == Mode::kNeuron) s = checked_s(v, "--param");
    if (mode == Mode::kMutant) threshold = checked_threshold(v, "--param");
  }

  const Inputs in = load_inputs(args);
  EngineOptions options;
  options.workers = args.workers;
  const MutationTester tester(in.model, in.dataset, options);

  const auto seeded = [&](double parameter, std::size_t count) {
    std::vector<Repetition> reps;
    for (std::size_t i = 0; i < count; ++i) {
      reps.push_back({i, derive_seed(args.seed, mode_text, parameter, i)});
    }
    return reps;
  };

  std::vector<RunResult> rows;
  {
    std::vector<Repetition> reps;
    for (std::size_t i = 0; i < args.vanilla_reps; ++i) {
      reps.push_back({i, derive_seed(args.seed, "vanilla", 0.0, i)});
    }
    rows = run_vanilla(tester, reps);
  }
  std::vector<RunResult> extra;
  if (mode == Mode::kNeuron) {
    extra = run_neuron_mode(tester, s, seeded(static_cast<double>(s), args.reps));
  } else if (mode == Mode::kMutant) {
    extra = run_mutant_mode(tester, threshold, seeded(threshold, args.reps));
  }
  rows.insert(rows.end(), extra.begin(), extra.end());

  const fs::path dir = output_dir(args);
  std::string csv = std::string(kResultsHeader) + "\n";
  for (const auto& r : rows) csv += format_row(r) + "\n";
  write_text(dir / "analyze.csv", csv);

  if (dump && mode == Mode::kNeuron) {
    write_text(dir / "dendrogram.tsv", dendrogram_table(cluster_model(in.model, s)));
  } else if (dump && mode == Mode::kMutant) {
    const auto partition = partition_mutants(in.model, threshold);
    write_text(dir / "partition.tsv",
               partition_table(select_representatives(partition.clusters, threshold,
                                                      extra.front().seed)));
  }

  out << "baseline accuracy: " << format_number(tester.baseline().accuracy()) << '\n';
  out << format_summary(summarize(rows));
  out << "results: " << (dir / "analyze.csv").string() << '\n';
  return kExitOk;
}

int sweep(const CommonArgs& args, const std::vector<std::string>& modes,
          const std::vector<double>& s_grid, const std::vector<double>& p_grid,
          std::ostream& out) {
  check_common(args);
  SweepConfig config;
  if (!modes.empty()) {
    config.modes.clear();
    for (const auto& m : modes) config.modes.push_back(*parse_mode(m));
  }
  if (!s_grid.empty()) {
    config.s_grid.clear();
    for (double v : s_grid) config.s_grid.push_back(checked_s(v, "--s-grid"));
  }
  if (!p_grid.empty()) {
    config.p_grid.clear();
    for (double v : p_grid) config.p_grid.push_back(checked_threshold(v, "--p-grid"));
  }
  config.repetitions = args.reps;
  config.vanilla_repetitions = args.vanilla_reps;
  config.master_seed = args.seed;
  config.engine.workers = args.workers;

  const Inputs in = load_inputs(args);
  const fs::path results = output_dir(args) / "results.csv";
  const std::size_t written = run_sweep(config, in.model, in.dataset, results);
  out << "wrote " << written << " new row(s) of " << planned_rows(config) << " planned to "
      << results.string() << '\n';
  out << format_summary(summarize(read_results(results)));
  return kExitOk;
}

int report(const std::string& results_path, const std::string& out_dir, std::ostream& out) {
  const auto rows = read_results(results_path);
  const auto summary = summarize(rows);
  const auto comparisons = compare_speedups(rows);
  const std::string summary_text = format_summary(summary);
  const std::string comparison_text = format_comparisons(comparisons);
  out << summary_text;
  if (!comparisons.empty()) out << '\n' << comparison_text;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "summary.csv", summary_text);
    write_text(fs::path(out_dir) / "comparisons.csv", comparison_text);
  }
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIncompatible:
    case ErrorCode::kShapeMismatch:
      return kExitIncompatible;
    case ErrorCode::kInvalidArgument:
      return kExitConfig;
    default:
      return kExitIo;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mutation analysis for small neural-network classifiers", "mutacc"};
  app.require_subcommand(1);

  CommonArgs analyze_args;
  std::string analyze_mode;
  std::optional<std::string> analyze_param;
  bool analyze_dump = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Run one mode at one parameter");
  add_common(*analyze_cmd, analyze_args);
  analyze_cmd->add_option("--mode", analyze_mode, "vanilla | neuron | mutant")
      ->required()
      ->check(CLI::IsMember({"vanilla", "neuron", "mutant"}));
  analyze_cmd->add_option("--param", analyze_param,
                          "Neurons per cluster (neuron) or linkage threshold (mutant)");
  analyze_cmd->add_flag("--dump", analyze_dump, "Write the clustering table next to the results");

  CommonArgs sweep_args;
  std::vector<std::string> sweep_modes;
  std::vector<double> s_grid;
  std::vector<double> p_grid;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run every mode over its parameter grid");
  add_common(*sweep_cmd, sweep_args);
  sweep_cmd->add_option("--mode", sweep_modes, "Modes to run (default: all)")
      ->delimiter(',')
      ->check(CLI::IsMember({"vanilla", "neuron", "mutant"}));
  sweep_cmd->add_option("--s-grid", s_grid, "Neurons-per-cluster grid (default 1..10)")
      ->delimiter(',');
  sweep_cmd->add_option("--p-grid", p_grid, "Threshold grid (default 0.1..0.9,0.99)")
      ->delimiter(',');

  std::string report_path;
  std::string report_out;
  auto* report_cmd = app.add_subcommand("report", "Summarize a results file");
  report_cmd->add_option("results", report_path, "Results CSV")->required();
  report_cmd->add_option("--out", report_out, "Also write summary.csv and comparisons.csv here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "mutacc: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (analyze_cmd->parsed()) {
      return analyze(analyze_args, analyze_mode, analyze_param, analyze_dump, out);
    }
    if (sweep_cmd->parsed()) return sweep(sweep_args, sweep_modes, s_grid, p_grid, out);
    return report(report_path, report_out, out);
  } catch (const ConfigError& e) {
    err << "mutacc: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "mutacc: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "mutacc: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "mutacc: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace mutacc
