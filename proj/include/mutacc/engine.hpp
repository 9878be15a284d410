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

#ifndef MUTACC_ENGINE_HPP
#define MUTACC_ENGINE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mutacc/dataset.hpp"
#include "mutacc/model.hpp"
#include "mutacc/mutant_clustering.hpp"
#include "mutacc/mutation.hpp"

namespace mutacc {

enum class Mode { kVanilla, kNeuron, kMutant };

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

/// kShortCircuit skips evaluation batches that cannot change the kill set.
/// Both scans yield identical kill sets.
enum class KillScan { kFull, kShortCircuit };

/// Test points are always evaluated in fixed consecutive batches of this
/// size, so every code path sees identical floating-point work per point.
inline constexpr std::size_t kEvalBatch = 128;

using ClassSet = std::vector<std::size_t>;  // ascending class indices
using KillRecord = std::vector<ClassSet>;   // indexed by mutant id

struct BaselinePredictions {
  std::vector<std::size_t> predicted;
  std::vector<bool> correct;

  double accuracy() const;
};

BaselinePredictions baseline_predictions(const Model& model, const LabeledDataset& dataset);

/// c is killed iff some point the original classifies correctly as c is
/// classified differently by `mutant_model`.
ClassSet killed_classes(const BaselinePredictions& baseline, const Model& mutant_model,
                        const LabeledDataset& dataset, KillScan scan = KillScan::kFull);

/// Sum of killed-class counts over (total_mutants * num_classes).
double mutation_score(std::span<const ClassSet> records, std::size_t total_mutants,
                      std::size_t num_classes);

/// (t_vanilla_avg - t) / t_vanilla_avg.
double speedup(double t_vanilla_avg, double t);

/// (s_vanilla_avg - s) / s_vanilla_avg; negative when s beats the baseline.
double score_error(double s_vanilla_avg, double s);

struct EngineOptions {
  std::size_t workers = 1;
  KillScan scan = KillScan::kShortCircuit;
  double change_fraction = kDefaultChangeFraction;
};

/// Evaluates mutants of one base model against one dataset. The original
/// model's activations at the input of every mutable layer are cached per
/// batch, so a mutant only re-runs the layers from its target onwards.
/// `model` and `dataset` must outlive the tester.
class MutationTester {
 public:
  MutationTester(const Model& model, const LabeledDataset& dataset, EngineOptions options = {});

  const BaselinePredictions& baseline() const noexcept { return baseline_; }
  const Model& model() const noexcept { return model_; }
  const LabeledDataset& dataset() const noexcept { return dataset_; }
  const EngineOptions& options() const noexcept { return options_; }

  ClassSet test(const MutationSpec& spec) const;

  /// Kill sets in the order of `mutants`, evaluated by options.workers threads.
  KillRecord test_all(std::span<const Mutant> mutants) const;

 private:
  const Model& model_;
  const LabeledDataset& dataset_;
  EngineOptions options_;
  BaselinePredictions baseline_;
  std::vector<std::size_t> batch_starts_;
  // activations_[layer][batch]: input of `layer`; empty for non-mutable layers.
  std::vector<std::vector<Eigen::MatrixXd>> activations_;
};

/// Gives every member of each cluster its representative's kill set.
/// `representative_kills[c]` belongs to cluster c.
KillRecord expand_kills(const MutantClusterSet& set, std::span<const ClassSet> representative_kills,
                        std::size_t total_mutants);

struct RunResult {
  Mode mode = Mode::kVanilla;
  std::optional<double> parameter;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  std::size_t total_mutants = 0;
  std::size_t tested_mutants = 0;
  std::size_t killed_classes = 0;  // sum of |killed| over all mutants
  double score = 0.0;
  double test_time_s = 0.0;
  double cluster_time_s = 0.0;
};

struct Repetition {
  std::size_t index = 0;
  std::uint64_t seed = 0;
};

/// Repetitions 0..count-1 seeded with repetition_seed(seed, i).
std::vector<Repetition> make_repetitions(std::size_t count, std::uint64_t seed = 0);

std::vector<RunResult> run_vanilla(const MutationTester& tester,
                                   std::span<const Repetition> reps);
std::vector<RunResult> run_neuron_mode(const MutationTester& tester, std::size_t neurons_per_cluster,
                                       std::span<const Repetition> reps);
std::vector<RunResult> run_mutant_mode(const MutationTester& tester, double threshold,
                                       std::span<const Repetition> reps);

std::vector<RunResult> run_vanilla(const Model& model, const LabeledDataset& dataset,
                                   std::size_t repetitions, const EngineOptions& options = {});
std::vector<RunResult> run_neuron_mode(const Model& model, const LabeledDataset& dataset,
                                       std::size_t neurons_per_cluster, std::size_t repetitions,
                                       const EngineOptions& options = {});
std::vector<RunResult> run_mutant_mode(const Model& model, const LabeledDataset& dataset,
                                       double threshold, std::uint64_t seed,
                                       std::size_t repetitions, const EngineOptions& options = {});

/// Mutant-mode clustering independent of the representative draw.
struct MutantPartition {
  std::vector<Mutant> mutants;
  std::vector<std::vector<std::size_t>> clusters;  // mutant ids
  std::vector<MergeStep<double>> merges;
};

MutantPartition partition_mutants(const Model& model, double threshold,
                                  double change_fraction = kDefaultChangeFraction);

/// Throws Error{kIncompatible} unless the dataset fits the model's input and classes.
void check_compatible(const Model& model, const LabeledDataset& dataset);

}  // namespace mutacc

#endif  // MUTACC_ENGINE_HPP
