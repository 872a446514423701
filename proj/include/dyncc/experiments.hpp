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
#pragma once

// Multi-episode experiments. Episode r of any table uses seed seed_base + r
// for every strategy and parameter value, so rows are paired: they share
// worker draws, positions and straggler selections.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dyncc/scenario.hpp"

namespace dyncc {

enum class ExperimentKind { kSweepB, kCompare, kStress, kSuccessRate };

const char* ToString(ExperimentKind kind);
std::optional<ExperimentKind> ParseExperiment(const std::string& name);
// "sweep-b, compare, stress, success-rate"
std::string ExperimentNames();

enum class FailureDistribution { kUniformCount, kIndependent };

const char* ToString(FailureDistribution d);
std::optional<FailureDistribution> ParseFailureDistribution(const std::string& name);

struct ExperimentConfig {
  ScenarioConfig scenario;
  ExperimentKind kind = ExperimentKind::kCompare;
  std::vector<std::size_t> b_values;  // sweep-b; empty: DefaultBValues
  double ratio = 0.5;                 // compare
  std::vector<double> ratios;         // stress; empty: DefaultRatios
  std::size_t runs = 2000;            // success-rate
  FailureDistribution failure_distribution = FailureDistribution::kUniformCount;
  double failure_prob = 0.5;  // kIndependent only
  // Straggler ratio (delayed mode) under which an unset b is swept.
  double b_sweep_ratio = 0.5;
  unsigned threads = 0;       // 0: hardware concurrency
};

void ValidateExperiment(const ExperimentConfig& config);

// b = ceil(N2 / 2^k) for k = 6..0, deduplicated and ascending.
std::vector<std::size_t> DefaultBValues(const ScenarioConfig& scenario);
// k / P for k = 0..P.
std::vector<double> DefaultRatios(const ScenarioConfig& scenario);

// Calls fn(i) for i in [0, count) on up to `threads` threads. The first
// exception thrown by any call is rethrown.
void ParallelFor(std::size_t count, unsigned threads,
                 const std::function<void(std::size_t)>& fn);

struct SweepRow {
  std::size_t b = 0;
  double mean_time = 0.0;
  double std_time = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t best_b = 0;
};

SweepResult SweepB(const ScenarioConfig& scenario, std::span<const std::size_t> b_values,
                   std::size_t repetitions, unsigned threads = 0);

// Fills b and s when the scenario leaves them at 0. b is the argmin of a
// sweep over DefaultBValues with `b_sweep_ratio` delayed stragglers and no
// late joiners; s is SelectS on the seed_base worker draw.
ScenarioConfig ResolveParameters(const ScenarioConfig& scenario, double b_sweep_ratio,
                                 unsigned threads = 0);

struct StrategyRow {
  double ratio = 0.0;
  StrategyKind strategy = StrategyKind::kDynamic;
  std::size_t runs = 0;
  double mean_time = 0.0;
  double std_time = 0.0;
  double success_rate = 0.0;
};

inline constexpr StrategyKind kAllStrategies[] = {
    StrategyKind::kUncoded, StrategyKind::kTraditional, StrategyKind::kDynamic};

// `scenario` must have b and s resolved.
std::vector<StrategyRow> CompareStrategies(const ScenarioConfig& scenario, double ratio,
                                           unsigned threads = 0);
std::vector<StrategyRow> StressTest(const ScenarioConfig& scenario,
                                    std::span<const double> ratios,
                                    unsigned threads = 0);

struct SuccessRow {
  StrategyKind strategy = StrategyKind::kDynamic;
  std::size_t runs = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  std::size_t runs_with_survivor = 0;
  std::size_t successes_with_survivor = 0;
};

struct SuccessResult {
  std::vector<SuccessRow> rows;
  std::vector<std::size_t> failure_counts;  // per run
};

// Failed-node count for run `seed` among P workers.
std::size_t DrawFailureCount(std::uint64_t seed, std::size_t workers,
                             FailureDistribution distribution, double failure_prob);

SuccessResult SuccessRate(const ScenarioConfig& scenario, std::size_t runs,
                          FailureDistribution distribution, double failure_prob,
                          unsigned threads = 0);

// Times with six significant digits.
std::string FormatTime(double seconds);

std::string SweepCsv(const SweepResult& result);
std::string StrategyCsv(const std::vector<StrategyRow>& rows, const std::string& scenario);
std::string StressCsv(const std::vector<StrategyRow>& rows);
std::string SuccessCsv(const SuccessResult& result);

struct ExperimentReport {
  std::string csv_path;
  std::string manifest_path;
  std::string summary;  // one human-readable line
};

// Runs the configured experiment and writes <out_dir>/<name>.csv plus the
// sidecar <out_dir>/<name>.manifest. The manifest is itself a loadable
// config with the resolved parameters, so any row can be re-run from it.
ExperimentReport RunExperiment(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace dyncc
