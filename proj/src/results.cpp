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

#include "mutacc/results.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <tuple>

#include "mutacc/dataset.hpp"
#include "mutacc/error.hpp"

namespace mutacc {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

template <typename T>
bool parse_value(std::string_view text, T& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::optional<RunResult> parse_row(std::string_view line) {
  const auto f = split(line, ',');
  if (f.size() != 10) return std::nullopt;
  RunResult r;
  const auto mode = parse_mode(f[0]);
  if (!mode) return std::nullopt;
  r.mode = *mode;
  if (f[1].empty()) {
    if (r.mode != Mode::kVanilla) return std::nullopt;
  } else {
    double p = 0.0;
    if (r.mode == Mode::kVanilla || !parse_value(f[1], p)) return std::nullopt;
    r.parameter = p;
  }
  if (!parse_value(f[2], r.repetition) || !parse_value(f[3], r.seed) ||
      !parse_value(f[4], r.total_mutants) || !parse_value(f[5], r.tested_mutants) ||
      !parse_value(f[6], r.score) || !parse_value(f[7], r.test_time_s) ||
      !parse_value(f[8], r.cluster_time_s) || !parse_value(f[9], r.killed_classes)) {
    return std::nullopt;
  }
  if (r.tested_mutants > r.total_mutants || r.score < 0.0 || r.score > 1.0) {
    return std::nullopt;
  }
  return r;
}

// Sort key: vanilla, neuron, mutant; then parameter.
using GroupKey = std::tuple<int, double>;

GroupKey group_key(const RunResult& r) {
  return {static_cast<int>(r.mode), r.parameter.value_or(0.0)};
}

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

struct VanillaMeans {
  double time = 0.0;
  double score = 0.0;
  bool present = false;
};

VanillaMeans vanilla_means(const std::vector<RunResult>& rows) {
  std::vector<double> times, scores;
  for (const auto& r : rows) {
    if (r.mode != Mode::kVanilla) continue;
    times.push_back(r.test_time_s);
    scores.push_back(r.score);
  }
  if (times.empty()) return {};
  return {mean(times), mean(scores), true};
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_parameter(const std::optional<double>& parameter) {
  return parameter ? format_number(*parameter) : std::string();
}

std::string format_row(const RunResult& r) {
  std::ostringstream os;
  os << to_string(r.mode) << ',' << format_parameter(r.parameter) << ',' << r.repetition << ','
     << r.seed << ',' << r.total_mutants << ',' << r.tested_mutants << ','
     << format_number(r.score) << ',' << format_number(r.test_time_s) << ','
     << format_number(r.cluster_time_s) << ',' << r.killed_classes;
  return os.str();
}

ParsedResults parse_results(std::string_view text) {
  ParsedResults out;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != kResultsHeader) out.bad_lines.push_back(line_no);
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    if (auto row = parse_row(line)) {
      out.rows.push_back(*row);
    } else {
      out.bad_lines.push_back(line_no);
    }
  }
  if (!header_seen) out.bad_lines.push_back(1);
  return out;
}

std::vector<RunResult> read_results(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  const std::string text(bytes.begin(), bytes.end());
  auto parsed = parse_results(text);
  if (!parsed.bad_lines.empty()) {
    std::string lines;
    for (std::size_t i = 0; i < parsed.bad_lines.size(); ++i) {
      lines += (i ? ", " : "") + std::to_string(parsed.bad_lines[i]);
    }
    throw Error(ErrorCode::kParse, path.string() + ": malformed line(s) " + lines);
  }
  return std::move(parsed.rows);
}

std::vector<SummaryRow> summarize(const std::vector<RunResult>& rows) {
  const VanillaMeans vanilla = vanilla_means(rows);
  std::map<GroupKey, std::vector<const RunResult*>> groups;
  for (const auto& r : rows) groups[group_key(r)].push_back(&r);

  std::vector<SummaryRow> out;
  for (const auto& [key, members] : groups) {
    std::vector<double> scores, times, tested, total;
    for (const RunResult* r : members) {
      scores.push_back(r->score);
      times.push_back(r->test_time_s);
      tested.push_back(static_cast<double>(r->tested_mutants));
      total.push_back(static_cast<double>(r->total_mutants));
    }
    SummaryRow s;
    s.mode = members.front()->mode;
    s.parameter = members.front()->parameter;
    s.runs = members.size();
    s.mean_score = mean(scores);
    s.mean_time_s = mean(times);
    s.mean_tested = mean(tested);
    s.mean_total = mean(total);
    if (s.mode != Mode::kVanilla && vanilla.present) {
      if (vanilla.time > 0.0) s.speedup = speedup(vanilla.time, s.mean_time_s);
      if (vanilla.score > 0.0) s.score_error = score_error(vanilla.score, s.mean_score);
    }
    out.push_back(s);
  }
  return out;
}

std::vector<SpeedupComparison> compare_speedups(const std::vector<RunResult>& rows) {
  const VanillaMeans vanilla = vanilla_means(rows);
  if (!vanilla.present || !(vanilla.time > 0.0)) return {};
  std::map<double, std::vector<double>> neuron, mutant;
  for (const auto& r : rows) {
    if (r.mode == Mode::kNeuron) neuron[*r.parameter].push_back(speedup(vanilla.time, r.test_time_s));
    if (r.mode == Mode::kMutant) mutant[*r.parameter].push_back(speedup(vanilla.time, r.test_time_s));
  }
  std::vector<SpeedupComparison> out;
  auto a = neuron.begin();
  auto b = mutant.begin();
  for (; a != neuron.end() && b != mutant.end(); ++a, ++b) {
    out.push_back({a->first, b->first, a->second.size(), b->second.size(),
                   mann_whitney_u(a->second, b->second)});
  }
  return out;
}

std::string format_summary(const std::vector<SummaryRow>& summary) {
  std::ostringstream os;
  os << "mode,parameter,runs,mean_score,mean_time_s,speedup,score_error,mean_tested,mean_total\n";
  for (const auto& s : summary) {
    os << to_string(s.mode) << ',' << format_parameter(s.parameter) << ',' << s.runs << ','
       << format_number(s.mean_score) << ',' << format_number(s.mean_time_s) << ','
       << (s.speedup ? format_number(*s.speedup) : "") << ','
       << (s.score_error ? format_number(*s.score_error) : "") << ','
       << format_number(s.mean_tested) << ',' << format_number(s.mean_total) << '\n';
  }
  return os.str();
}

std::string format_comparisons(const std::vector<SpeedupComparison>& comparisons) {
  std::ostringstream os;
  os << "neuron_parameter,mutant_parameter,neuron_runs,mutant_runs,u,z,p_value\n";
  for (const auto& c : comparisons) {
    os << format_number(c.neuron_parameter) << ',' << format_number(c.mutant_parameter) << ','
       << c.neuron_samples << ',' << c.mutant_samples << ',' << format_number(c.test.u) << ','
       << format_number(c.test.z) << ',' << format_number(c.test.p_value) << '\n';
  }
  return os.str();
}

}  // namespace mutacc
