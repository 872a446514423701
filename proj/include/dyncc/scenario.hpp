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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyncc/sim_engine.hpp"
#include "dyncc/strategies.hpp"

namespace dyncc {

enum class StragglerMode { kDelayed, kFail, kLeave };

const char* ToString(StragglerMode mode);
std::optional<StragglerMode> ParseStragglerMode(const std::string& name);

struct StragglerSpec {
  double ratio = 0.0;  // fraction of the P initial workers, rounded
  StragglerMode mode = StragglerMode::kDelayed;
  double delay_factor = 15.0;
  double event_time = 0.0;  // failure/leave time for kFail/kLeave
};

struct ScenarioConfig {
  std::string name = "scenario1";
  std::size_t n1 = 4096;
  std::size_t n2 = 2048;
  std::size_t workers = 8;
  double mu_min = 3e6;
  double mu_max = 6e6;  // alpha_j = 1 / mu_j
  double load_constant = 1.0;
  double init_box_m = 1500.0;
  double max_speed_mps = 10.0;
  CommParams comm;
  StragglerSpec straggler;
  // Extra workers (ids P..P+late-1) that appear at join_time.
  std::size_t late_workers = 0;
  double join_time = 0.0;
  // Compute real convolutions and decodes, not just their timing.
  bool compute_payload = false;
  double horizon_factor = 50.0;
  double decode_seconds_per_op = 0.0;
  std::size_t b = 0;  // 0: choose automatically
  std::size_t s = 0;  // 0: choose automatically
  std::size_t repetitions = 25;
  std::uint64_t seed_base = 1;
};

// Scenarios 1-4 with N1 and N2 divided by `scale` (rounded, at least 1).
ScenarioConfig PresetScenario(int index, double scale = 1.0);

// Throws kValidation describing the first offending field.
void ValidateScenario(const ScenarioConfig& scenario);

// Default piece length when the scenario leaves b unset: ceil(N2 / P).
std::size_t DefaultPieceLength(const ScenarioConfig& scenario);

struct EpisodeOptions {
  bool record_events = false;
  // Overrides the straggler ratio with an exact straggler count.
  std::optional<std::size_t> straggler_count;
};

struct EpisodeMetrics {
  StrategyKind strategy = StrategyKind::kDynamic;
  StrategyOutcome outcome;
  std::vector<SimEvent> event_log;
  std::uint64_t rng_seed = 0;
  double horizon = 0.0;
  double wall_runtime = 0.0;  // host seconds, informational
  std::size_t b = 0;
  std::size_t s = 0;
  std::vector<WorkerProfile> workers;  // as drawn at t = 0
  std::size_t pieces_dropped = 0;
  std::size_t in_flight = 0;
  std::size_t results_delivered = 0;
  std::vector<SimEngine::ComputeDraw> compute_draws;
};

// Worker population for (scenario, seed), with stragglers applied.
std::vector<WorkerProfile> DrawWorkers(const ScenarioConfig& scenario,
                                       std::uint64_t seed,
                                       std::optional<std::size_t> straggler_count);

// The a and x vectors for (scenario, seed), uniform on [-1, 1].
std::pair<RealVector, RealVector> DrawTask(const ScenarioConfig& scenario,
                                           std::uint64_t seed);

std::vector<ComputeProfile> ComputeProfiles(const std::vector<WorkerProfile>& workers,
                                            std::size_t count);

// Runs one strategy for (scenario, seed). When the episode has stragglers or
// failures, a straggler-free pilot of the same strategy and seed fixes the
// horizon at horizon_factor times its completion time.
EpisodeMetrics RunEpisode(const ScenarioConfig& scenario, StrategyKind strategy,
                          std::uint64_t seed, const EpisodeOptions& options = {});

}  // namespace dyncc
