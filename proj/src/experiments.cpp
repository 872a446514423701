/* Copyright 2026 The dyncc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "dyncc/experiments.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "dyncc/config.hpp"
#include "dyncc/error.hpp"

#ifndef DYNCC_VERSION
#define DYNCC_VERSION "unknown"
#endif

namespace dyncc {
namespace {

struct Stats {
  double mean = 0.0;
  double std = 0.0;
};

// Sample standard deviation (n - 1); 0 for a single value.
Stats Summarize(std::span<const double> values) {
  Stats s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::vector<StrategyRow> RunStrategyTable(const ScenarioConfig& scenario, double ratio,
                                          unsigned threads) {
  ScenarioConfig cfg = scenario;
  cfg.straggler.ratio = ratio;
  const std::size_t reps = cfg.repetitions;
  constexpr std::size_t kStrategies = std::size(kAllStrategies);
  std::vector<double> times(kStrategies * reps);
  std::vector<char> ok(kStrategies * reps);
  ParallelFor(kStrategies * reps, threads, [&](std::size_t i) {
    const auto strategy = kAllStrategies[i / reps];
    const auto m = RunEpisode(cfg, strategy, cfg.seed_base + i % reps);
    times[i] = m.outcome.completion_time;
    ok[i] = m.outcome.success ? 1 : 0;
  });
  std::vector<StrategyRow> rows;
  for (std::size_t k = 0; k < kStrategies; ++k) {
    std::span<const double> t(times.data() + k * reps, reps);
    const auto stats = Summarize(t);
    const auto successes = std::count(ok.begin() + static_cast<std::ptrdiff_t>(k * reps),
                                      ok.begin() + static_cast<std::ptrdiff_t>((k + 1) * reps),
                                      1);
    rows.push_back({ratio, kAllStrategies[k], reps, stats.mean, stats.std,
                    static_cast<double>(successes) / static_cast<double>(reps)});
  }
  return rows;
}

std::string UtcNow() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}",
                     fmt::gmtime(std::chrono::system_clock::to_time_t(
                         std::chrono::system_clock::now())));
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) Fail(ErrorCode::kIo, "failed writing " + path.string());
}

std::string JoinSizes(std::span<const std::size_t> v) {
  return fmt::format("{}", fmt::join(v, ","));
}

}  // namespace

const char* ToString(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSweepB: return "sweep-b";
    case ExperimentKind::kCompare: return "compare";
    case ExperimentKind::kStress: return "stress";
    case ExperimentKind::kSuccessRate: return "success-rate";
  }
  return "unknown";
}

std::optional<ExperimentKind> ParseExperiment(const std::string& name) {
  if (name == "sweep-b") return ExperimentKind::kSweepB;
  if (name == "compare") return ExperimentKind::kCompare;
  if (name == "stress") return ExperimentKind::kStress;
  if (name == "success-rate") return ExperimentKind::kSuccessRate;
  return std::nullopt;
}

std::string ExperimentNames() { return "sweep-b, compare, stress, success-rate"; }

const char* ToString(FailureDistribution d) {
  return d == FailureDistribution::kUniformCount ? "uniform-count" : "independent";
}

std::optional<FailureDistribution> ParseFailureDistribution(const std::string& name) {
  if (name == "uniform-count") return FailureDistribution::kUniformCount;
  if (name == "independent") return FailureDistribution::kIndependent;
  return std::nullopt;
}

void ValidateExperiment(const ExperimentConfig& c) {
  ValidateScenario(c.scenario);
  for (auto b : c.b_values) {
    if (b < 1 || b > c.scenario.n2) {
      Fail(ErrorCode::kValidation,
           fmt::format("b={} outside [1, N2={}]", b, c.scenario.n2));
    }
  }
  auto check_ratio = [](double r) {
    if (!(r >= 0.0 && r <= 1.0)) {
      Fail(ErrorCode::kValidation, fmt::format("ratio {} outside [0, 1]", r));
    }
  };
  check_ratio(c.ratio);
  check_ratio(c.b_sweep_ratio);
  for (double r : c.ratios) check_ratio(r);
  if (c.runs < 1) Fail(ErrorCode::kValidation, "runs must be >= 1");
  if (!(c.failure_prob >= 0.0 && c.failure_prob <= 1.0)) {
    Fail(ErrorCode::kValidation, "failure probability must lie in [0, 1]");
  }
}

std::vector<std::size_t> DefaultBValues(const ScenarioConfig& scenario) {
  std::vector<std::size_t> out;
  for (int k = 6; k >= 0; --k) {
    const std::size_t parts = std::size_t{1} << k;
    const std::size_t b = (scenario.n2 + parts - 1) / parts;
    if (b >= 1 && (out.empty() || out.back() != b)) out.push_back(b);
  }
  return out;
}

std::vector<double> DefaultRatios(const ScenarioConfig& scenario) {
  std::vector<double> out;
  for (std::size_t k = 0; k <= scenario.workers; ++k) {
    out.push_back(static_cast<double>(k) / static_cast<double>(scenario.workers));
  }
  return out;
}

void ParallelFor(std::size_t count, unsigned threads,
                 const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

SweepResult SweepB(const ScenarioConfig& scenario, std::span<const std::size_t> b_values,
                   std::size_t repetitions, unsigned threads) {
  Require(!b_values.empty(), "sweep needs at least one b");
  Require(repetitions >= 1, "sweep needs at least one repetition");
  for (auto b : b_values) {
    if (b < 1 || b > scenario.n2) {
      Fail(ErrorCode::kValidation, fmt::format("b={} outside [1, N2={}]", b, scenario.n2));
    }
  }
  std::vector<double> times(b_values.size() * repetitions);
  ParallelFor(times.size(), threads, [&](std::size_t i) {
    ScenarioConfig cfg = scenario;
    cfg.b = b_values[i / repetitions];
    const auto m = RunEpisode(cfg, StrategyKind::kDynamic,
                              cfg.seed_base + i % repetitions);
    times[i] = m.outcome.completion_time;
  });
  SweepResult result;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < b_values.size(); ++k) {
    const auto stats = Summarize({times.data() + k * repetitions, repetitions});
    result.rows.push_back({b_values[k], stats.mean, stats.std});
    if (stats.mean < best) {
      best = stats.mean;
      result.best_b = b_values[k];
    }
  }
  return result;
}

ScenarioConfig ResolveParameters(const ScenarioConfig& scenario, double b_sweep_ratio,
                                 unsigned threads) {
  ScenarioConfig out = scenario;
  if (out.b == 0) {
    ScenarioConfig sweep = scenario;
    sweep.straggler.ratio = b_sweep_ratio;
    sweep.straggler.mode = StragglerMode::kDelayed;
    sweep.late_workers = 0;
    sweep.compute_payload = false;
    const auto grid = DefaultBValues(sweep);
    out.b = SweepB(sweep, grid, sweep.repetitions, threads).best_b;
  }
  if (out.s == 0) {
    const auto workers = DrawWorkers(scenario, scenario.seed_base, std::size_t{0});
    out.s = SelectS(scenario.n1, scenario.n2, scenario.workers,
                    ComputeProfiles(workers, scenario.workers), scenario.load_constant);
  }
  return out;
}

std::vector<StrategyRow> CompareStrategies(const ScenarioConfig& scenario, double ratio,
                                           unsigned threads) {
  Require(scenario.b != 0 && scenario.s != 0, "compare needs resolved b and s");
  return RunStrategyTable(scenario, ratio, threads);
}

std::vector<StrategyRow> StressTest(const ScenarioConfig& scenario,
                                    std::span<const double> ratios, unsigned threads) {
  Require(scenario.b != 0 && scenario.s != 0, "stress test needs resolved b and s");
  std::vector<StrategyRow> rows;
  for (double r : ratios) {
    auto table = RunStrategyTable(scenario, r, threads);
    rows.insert(rows.end(), table.begin(), table.end());
  }
  return rows;
}

std::size_t DrawFailureCount(std::uint64_t seed, std::size_t workers,
                             FailureDistribution distribution, double failure_prob) {
  CounterRng rng(seed, StreamPurpose::kFailureCount, 0);
  if (distribution == FailureDistribution::kUniformCount) {
    return static_cast<std::size_t>(rng.Below(workers + 1));
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < workers; ++i) count += rng.Uniform() < failure_prob ? 1 : 0;
  return count;
}

SuccessResult SuccessRate(const ScenarioConfig& scenario, std::size_t runs,
                          FailureDistribution distribution, double failure_prob,
                          unsigned threads) {
  Require(scenario.b != 0 && scenario.s != 0, "success-rate needs resolved b and s");
  ScenarioConfig cfg = scenario;
  if (cfg.straggler.mode == StragglerMode::kDelayed) cfg.straggler.mode = StragglerMode::kFail;

  SuccessResult result;
  result.failure_counts.resize(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    result.failure_counts[r] =
        DrawFailureCount(cfg.seed_base + r, cfg.workers, distribution, failure_prob);
  }
  constexpr std::size_t kStrategies = std::size(kAllStrategies);
  std::vector<char> ok(kStrategies * runs);
  ParallelFor(ok.size(), threads, [&](std::size_t i) {
    const std::size_t r = i % runs;
    EpisodeOptions opts;
    opts.straggler_count = result.failure_counts[r];
    const auto m = RunEpisode(cfg, kAllStrategies[i / runs], cfg.seed_base + r, opts);
    ok[i] = m.outcome.success ? 1 : 0;
  });
  for (std::size_t k = 0; k < kStrategies; ++k) {
    SuccessRow row;
    row.strategy = kAllStrategies[k];
    row.runs = runs;
    for (std::size_t r = 0; r < runs; ++r) {
      const bool success = ok[k * runs + r] != 0;
      row.successes += success ? 1 : 0;
      if (result.failure_counts[r] < cfg.workers + cfg.late_workers) {
        ++row.runs_with_survivor;
        row.successes_with_survivor += success ? 1 : 0;
      }
    }
    row.success_rate = static_cast<double>(row.successes) / static_cast<double>(runs);
    result.rows.push_back(row);
  }
  return result;
}

std::string FormatTime(double seconds) { return fmt::format("{:.6g}", seconds); }

std::string SweepCsv(const SweepResult& result) {
  std::string out = "b,mean_time_s,std_time_s\n";
  for (const auto& row : result.rows) {
    out += fmt::format("{},{},{}\n", row.b, FormatTime(row.mean_time),
                       FormatTime(row.std_time));
  }
  return out;
}

std::string StrategyCsv(const std::vector<StrategyRow>& rows, const std::string& scenario) {
  std::string out = "scenario,straggler_ratio,strategy,mean_time_s,std_time_s,success_rate\n";
  for (const auto& row : rows) {
    out += fmt::format("{},{:.6g},{},{},{},{:.6g}\n", scenario, row.ratio,
                       ToString(row.strategy), FormatTime(row.mean_time),
                       FormatTime(row.std_time), row.success_rate);
  }
  return out;
}

std::string StressCsv(const std::vector<StrategyRow>& rows) {
  std::string out = "ratio,strategy,mean_time_s,std_time_s\n";
  for (const auto& row : rows) {
    out += fmt::format("{:.6g},{},{},{}\n", row.ratio, ToString(row.strategy),
                       FormatTime(row.mean_time), FormatTime(row.std_time));
  }
  return out;
}

std::string SuccessCsv(const SuccessResult& result) {
  std::string out = "strategy,runs,successes,success_rate\n";
  for (const auto& row : result.rows) {
    out += fmt::format("{},{},{},{:.6g}\n", ToString(row.strategy), row.runs,
                       row.successes, row.success_rate);
  }
  return out;
}

ExperimentReport RunExperiment(const ExperimentConfig& config, const std::string& out_dir) {
  ValidateExperiment(config);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create output directory " + out_dir);

  ExperimentConfig resolved = config;
  std::string csv;
  std::string summary;
  std::string extra;
  const auto& sc = config.scenario;

  switch (config.kind) {
    case ExperimentKind::kSweepB: {
      if (resolved.b_values.empty()) resolved.b_values = DefaultBValues(sc);
      const auto result = SweepB(sc, resolved.b_values, sc.repetitions, config.threads);
      csv = SweepCsv(result);
      extra = fmt::format("best_b = {}\n", result.best_b);
      summary = fmt::format("{}: best b = {}", sc.name, result.best_b);
      break;
    }
    case ExperimentKind::kCompare: {
      resolved.scenario = ResolveParameters(sc, config.b_sweep_ratio, config.threads);
      const auto rows = CompareStrategies(resolved.scenario, config.ratio, config.threads);
      csv = StrategyCsv(rows, sc.name);
      summary = fmt::format("{} at ratio {:g}:", sc.name, config.ratio);
      for (const auto& r : rows) {
        summary += fmt::format(" {}={}s", ToString(r.strategy), FormatTime(r.mean_time));
      }
      break;
    }
    case ExperimentKind::kStress: {
      resolved.scenario = ResolveParameters(sc, config.b_sweep_ratio, config.threads);
      if (resolved.ratios.empty()) resolved.ratios = DefaultRatios(sc);
      const auto rows = StressTest(resolved.scenario, resolved.ratios, config.threads);
      csv = StressCsv(rows);
      summary = fmt::format("{}: {} ratios x 3 strategies", sc.name, resolved.ratios.size());
      break;
    }
    case ExperimentKind::kSuccessRate: {
      resolved.scenario = ResolveParameters(sc, config.b_sweep_ratio, config.threads);
      const auto result =
          SuccessRate(resolved.scenario, config.runs, config.failure_distribution,
                      config.failure_prob, config.threads);
      csv = SuccessCsv(result);
      summary = fmt::format("{} over {} runs:", sc.name, config.runs);
      for (const auto& r : result.rows) {
        summary += fmt::format(" {}={:.4f}", ToString(r.strategy), r.success_rate);
      }
      break;
    }
  }

  std::string stem = ToString(config.kind);
  std::replace(stem.begin(), stem.end(), '-', '_');
  const auto dir = std::filesystem::path(out_dir);
  const auto csv_path = dir / (stem + ".csv");
  const auto manifest_path = dir / (stem + ".manifest");

  const std::size_t seeds = config.kind == ExperimentKind::kSuccessRate
                                ? config.runs
                                : config.scenario.repetitions;
  std::string manifest = "# Resolved configuration; load with `dyncc run`.\n[manifest]\n";
  manifest += fmt::format("version = {}\n", DYNCC_VERSION);
  manifest += fmt::format("created_utc = {}\n", UtcNow());
  manifest += fmt::format("csv = {}\n", csv_path.filename().string());
  manifest += fmt::format("seeds = {}..{}\n", config.scenario.seed_base,
                          config.scenario.seed_base + seeds - 1);
  manifest += extra;
  if (!resolved.b_values.empty()) {
    manifest += fmt::format("swept_b = {}\n", JoinSizes(resolved.b_values));
  }
  manifest += "\n" + FormatConfig(resolved);

  WriteFile(csv_path, csv);
  WriteFile(manifest_path, manifest);
  return {csv_path.string(), manifest_path.string(), summary};
}

}  // namespace dyncc
