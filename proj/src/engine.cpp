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

#include "mutacc/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "mutacc/error.hpp"
#include "mutacc/neuron_clustering.hpp"
#include "mutacc/random.hpp"

namespace mutacc {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::size_t> batch_starts(std::size_t n) {
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s < n; s += kEvalBatch) starts.push_back(s);
  return starts;
}

std::size_t batch_length(std::size_t start, std::size_t n) {
  return std::min(kEvalBatch, n - start);
}

Eigen::MatrixXd input_batch(const LabeledDataset& dataset, std::size_t start) {
  return dataset.inputs().middleCols(static_cast<Eigen::Index>(start),
                                     static_cast<Eigen::Index>(batch_length(start, dataset.size())));
}

/// Accumulates kills batch by batch and knows when nothing more can change.
class KillTracker {
 public:
  KillTracker(const BaselinePredictions& baseline, const LabeledDataset& dataset)
      : baseline_(baseline), dataset_(dataset), killed_(dataset.num_classes(), false) {
    std::vector<bool> killable(dataset.num_classes(), false);
    for (std::size_t t = 0; t < dataset.size(); ++t) {
      if (baseline.correct[t]) killable[dataset.labels()[t]] = true;
    }
    open_ = static_cast<std::size_t>(std::count(killable.begin(), killable.end(), true));
  }

  /// False when no point in the batch can kill a class that is still alive.
  bool worth_evaluating(std::size_t start) const {
    if (open_ == 0) return false;
    const std::size_t end = start + batch_length(start, dataset_.size());
    for (std::size_t t = start; t < end; ++t) {
      if (baseline_.correct[t] && !killed_[dataset_.labels()[t]]) return true;
    }
    return false;
  }

  void record(std::size_t start, const Eigen::MatrixXd& probs) {
    for (Eigen::Index j = 0; j < probs.cols(); ++j) {
      const std::size_t t = start + static_cast<std::size_t>(j);
      if (!baseline_.correct[t]) continue;
      const std::size_t label = dataset_.labels()[t];
      if (!killed_[label] && argmax(probs.col(j)) != label) {
        killed_[label] = true;
        --open_;
      }
    }
  }

  ClassSet classes() const {
    ClassSet out;
    for (std::size_t c = 0; c < killed_.size(); ++c) {
      if (killed_[c]) out.push_back(c);
    }
    return out;
  }

 private:
  const BaselinePredictions& baseline_;
  const LabeledDataset& dataset_;
  std::vector<bool> killed_;
  std::size_t open_ = 0;
};

RunResult make_result(Mode mode, std::optional<double> parameter, const Repetition& rep,
                      std::size_t total, std::size_t tested, const KillRecord& kills,
                      std::size_t num_classes, double test_time, double cluster_time) {
  RunResult r;
  r.mode = mode;
  r.parameter = parameter;
  r.repetition = rep.index;
  r.seed = rep.seed;
  r.total_mutants = total;
  r.tested_mutants = tested;
  for (const auto& k : kills) r.killed_classes += k.size();
  r.score = mutation_score(kills, total, num_classes);
  r.test_time_s = test_time;
  r.cluster_time_s = cluster_time;
  return r;
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kVanilla: return "vanilla";
    case Mode::kNeuron: return "neuron";
    case Mode::kMutant: return "mutant";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "vanilla") return Mode::kVanilla;
  if (text == "neuron") return Mode::kNeuron;
  if (text == "mutant") return Mode::kMutant;
  return std::nullopt;
}

double BaselinePredictions::accuracy() const {
  if (correct.empty()) return 0.0;
  return static_cast<double>(std::count(correct.begin(), correct.end(), true)) /
         static_cast<double>(correct.size());
}

void check_compatible(const Model& model, const LabeledDataset& dataset) {
  if (element_count(model.input_shape()) != element_count(dataset.sample_shape())) {
    throw Error(ErrorCode::kIncompatible,
                "dataset samples " + to_string(dataset.sample_shape()) +
                    " do not fit model input " + to_string(model.input_shape()));
  }
  if (model.num_classes() != dataset.num_classes()) {
    throw Error(ErrorCode::kIncompatible,
                "model has " + std::to_string(model.num_classes()) + " classes, dataset has " +
                    std::to_string(dataset.num_classes()));
  }
}

BaselinePredictions baseline_predictions(const Model& model, const LabeledDataset& dataset) {
  check_compatible(model, dataset);
  BaselinePredictions out;
  out.predicted.reserve(dataset.size());
  for (std::size_t start : batch_starts(dataset.size())) {
    const Eigen::MatrixXd probs = forward_batch(model, input_batch(dataset, start));
    for (Eigen::Index j = 0; j < probs.cols(); ++j) out.predicted.push_back(argmax(probs.col(j)));
  }
  out.correct.resize(dataset.size());
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    out.correct[t] = out.predicted[t] == dataset.labels()[t];
  }
  return out;
}

ClassSet killed_classes(const BaselinePredictions& baseline, const Model& mutant_model,
                        const LabeledDataset& dataset, KillScan scan) {
  check_compatible(mutant_model, dataset);
  if (baseline.correct.size() != dataset.size()) {
    throw Error(ErrorCode::kInvalidArgument, "baseline was built from a different dataset");
  }
  KillTracker tracker(baseline, dataset);
  for (std::size_t start : batch_starts(dataset.size())) {
    if (scan == KillScan::kShortCircuit && !tracker.worth_evaluating(start)) continue;
    tracker.record(start, forward_batch(mutant_model, input_batch(dataset, start)));
  }
  return tracker.classes();
}

double mutation_score(std::span<const ClassSet> records, std::size_t total_mutants,
                      std::size_t num_classes) {
  if (total_mutants == 0 || num_classes == 0) {
    throw Error(ErrorCode::kInvalidArgument, "mutation score needs at least one mutant and class");
  }
  std::size_t killed = 0;
  for (const auto& r : records) killed += r.size();
  return static_cast<double>(killed) /
         (static_cast<double>(total_mutants) * static_cast<double>(num_classes));
}

double speedup(double t_vanilla_avg, double t) {
  if (!(t_vanilla_avg > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "vanilla baseline time must be positive");
  }
  return (t_vanilla_avg - t) / t_vanilla_avg;
}

double score_error(double s_vanilla_avg, double s) {
  if (!(s_vanilla_avg > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "vanilla baseline score must be positive");
  }
  return (s_vanilla_avg - s) / s_vanilla_avg;
}

MutationTester::MutationTester(const Model& model, const LabeledDataset& dataset,
                               EngineOptions options)
    : model_(model),
      dataset_(dataset),
      options_(options),
      batch_starts_(batch_starts(dataset.size())),
      activations_(model.layers().size()) {
  check_compatible(model, dataset);
  const auto& layers = model.layers();
  baseline_.predicted.reserve(dataset.size());
  for (std::size_t start : batch_starts_) {
    Eigen::MatrixXd current = input_batch(dataset, start);
    for (std::size_t i = 0; i < layers.size(); ++i) {
      if (is_mutable(layers[i])) activations_[i].push_back(current);
      current = apply_layer(layers[i], model.shape_at(i), current);
    }
    for (Eigen::Index j = 0; j < current.cols(); ++j) {
      baseline_.predicted.push_back(argmax(current.col(j)));
    }
  }
  baseline_.correct.resize(dataset.size());
  for (std::size_t t = 0; t < dataset.size(); ++t) {
    baseline_.correct[t] = baseline_.predicted[t] == dataset.labels()[t];
  }
}

ClassSet MutationTester::test(const MutationSpec& spec) const {
  const Model mutant = materialize(model_, spec);
  const std::size_t layer = spec.target.layer_idx;
  KillTracker tracker(baseline_, dataset_);
  for (std::size_t b = 0; b < batch_starts_.size(); ++b) {
    const std::size_t start = batch_starts_[b];
    if (options_.scan == KillScan::kShortCircuit && !tracker.worth_evaluating(start)) continue;
    tracker.record(start, forward_from(mutant, layer, activations_[layer][b]));
  }
  return tracker.classes();
}

KillRecord MutationTester::test_all(std::span<const Mutant> mutants) const {
  KillRecord out(mutants.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(options_.workers, mutants.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < mutants.size(); ++i) out[i] = test(mutants[i].spec);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < mutants.size(); i = next++) {
          try {
            out[i] = test(mutants[i].spec);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

KillRecord expand_kills(const MutantClusterSet& set, std::span<const ClassSet> representative_kills,
                        std::size_t total_mutants) {
  if (representative_kills.size() != set.clusters.size()) {
    throw Error(ErrorCode::kInvalidArgument, "need one kill set per cluster");
  }
  KillRecord out(total_mutants);
  std::vector<bool> assigned(total_mutants, false);
  for (std::size_t c = 0; c < set.clusters.size(); ++c) {
    for (std::size_t id : set.clusters[c]) {
      if (id >= total_mutants || assigned[id]) {
        throw Error(ErrorCode::kInvalidArgument, "clusters do not partition the mutant ids");
      }
      assigned[id] = true;
      out[id] = representative_kills[c];
    }
  }
  if (std::find(assigned.begin(), assigned.end(), false) != assigned.end()) {
    throw Error(ErrorCode::kInvalidArgument, "clusters do not cover every mutant");
  }
  return out;
}

std::vector<Repetition> make_repetitions(std::size_t count, std::uint64_t seed) {
  std::vector<Repetition> reps;
  for (std::size_t i = 0; i < count; ++i) reps.push_back({i, repetition_seed(seed, i)});
  return reps;
}

std::vector<RunResult> run_vanilla(const MutationTester& tester,
                                   std::span<const Repetition> reps) {
  const auto mutants = generate_vanilla_mutants(tester.model(), tester.options().change_fraction);
  std::vector<RunResult> out;
  for (const auto& rep : reps) {
    const auto start = Clock::now();
    const KillRecord kills = tester.test_all(mutants);
    const double elapsed = seconds_since(start);
    out.push_back(make_result(Mode::kVanilla, std::nullopt, rep, mutants.size(), mutants.size(),
                              kills, tester.dataset().num_classes(), elapsed, 0.0));
  }
  return out;
}

std::vector<RunResult> run_neuron_mode(const MutationTester& tester, std::size_t neurons_per_cluster,
                                       std::span<const Repetition> reps) {
  if (neurons_per_cluster < 1) {
    throw Error(ErrorCode::kInvalidArgument, "neurons per cluster must be >= 1");
  }
  const auto cluster_start = Clock::now();
  const NeuronClustering clustering = cluster_model(tester.model(), neurons_per_cluster);
  const double cluster_time = seconds_since(cluster_start);
  const auto mutants =
      generate_cluster_mutants(tester.model(), clustering, tester.options().change_fraction);

  std::vector<RunResult> out;
  for (const auto& rep : reps) {
    const auto start = Clock::now();
    const KillRecord kills = tester.test_all(mutants);
    const double elapsed = seconds_since(start);
    out.push_back(make_result(Mode::kNeuron, static_cast<double>(neurons_per_cluster), rep,
                              mutants.size(), mutants.size(), kills,
                              tester.dataset().num_classes(), elapsed, cluster_time));
  }
  return out;
}

MutantPartition partition_mutants(const Model& model, double threshold, double change_fraction) {
  MutantPartition out;
  out.mutants = generate_vanilla_mutants(model, change_fraction);
  const Eigen::MatrixXd graph = similarity_graph(mutant_features(model, out.mutants));
  auto agglomeration = cluster_mutants(graph, threshold);
  // Graph nodes are mutant positions, which equal mutant ids.
  out.clusters = std::move(agglomeration.clusters);
  out.merges = std::move(agglomeration.merges);
  return out;
}

std::vector<RunResult> run_mutant_mode(const MutationTester& tester, double threshold,
                                       std::span<const Repetition> reps) {
  const auto cluster_start = Clock::now();
  const MutantPartition partition =
      partition_mutants(tester.model(), threshold, tester.options().change_fraction);
  const double cluster_time = seconds_since(cluster_start);
  const std::size_t total = partition.mutants.size();

  std::vector<RunResult> out;
  for (const auto& rep : reps) {
    const auto select_start = Clock::now();
    const MutantClusterSet set = select_representatives(partition.clusters, threshold, rep.seed);
    std::vector<Mutant> chosen;
    chosen.reserve(set.representatives.size());
    for (std::size_t id : set.representatives) chosen.push_back(partition.mutants[id]);
    const double select_time = seconds_since(select_start);

    const auto start = Clock::now();
    const KillRecord rep_kills = tester.test_all(chosen);
    const double elapsed = seconds_since(start);

    const KillRecord kills = expand_kills(set, rep_kills, total);
    out.push_back(make_result(Mode::kMutant, threshold, rep, total, chosen.size(), kills,
                              tester.dataset().num_classes(), elapsed,
                              cluster_time + select_time));
  }
  return out;
}

std::vector<RunResult> run_vanilla(const Model& model, const LabeledDataset& dataset,
                                   std::size_t repetitions, const EngineOptions& options) {
  const MutationTester tester(model, dataset, options);
  return run_vanilla(tester, make_repetitions(repetitions));
}

std::vector<RunResult> run_neuron_mode(const Model& model, const LabeledDataset& dataset,
                                       std::size_t neurons_per_cluster, std::size_t repetitions,
                                       const EngineOptions& options) {
  const MutationTester tester(model, dataset, options);
  return run_neuron_mode(tester, neurons_per_cluster, make_repetitions(repetitions));
}

std::vector<RunResult> run_mutant_mode(const Model& model, const LabeledDataset& dataset,
                                       double threshold, std::uint64_t seed,
                                       std::size_t repetitions, const EngineOptions& options) {
  const MutationTester tester(model, dataset, options);
  return run_mutant_mode(tester, threshold, make_repetitions(repetitions, seed));
}

}  // namespace mutacc
