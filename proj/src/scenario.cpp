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
#include "dyncc/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "dyncc/error.hpp"

namespace dyncc {
namespace {

void Invalid(const std::string& what) { Fail(ErrorCode::kValidation, what); }

std::size_t Scaled(std::size_t n, double scale) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(n) / scale)));
}

StragglerBehavior StragglerFor(const StragglerSpec& spec) {
  switch (spec.mode) {
    case StragglerMode::kDelayed: return behavior::Delayed{spec.delay_factor};
    case StragglerMode::kFail: return behavior::FailedAt{spec.event_time};
    case StragglerMode::kLeave: return behavior::LeavesAt{spec.event_time};
  }
  return behavior::Normal{};
}

}  // namespace

const char* ToString(StragglerMode mode) {
  switch (mode) {
    case StragglerMode::kDelayed: return "delayed";
    case StragglerMode::kFail: return "fail";
    case StragglerMode::kLeave: return "leave";
  }
  return "unknown";
}

std::optional<StragglerMode> ParseStragglerMode(const std::string& name) {
  if (name == "delayed") return StragglerMode::kDelayed;
  if (name == "fail") return StragglerMode::kFail;
  if (name == "leave") return StragglerMode::kLeave;
  return std::nullopt;
}

ScenarioConfig PresetScenario(int index, double scale) {
  if (!(scale > 0.0)) Invalid("scale must be > 0");
  ScenarioConfig c;
  switch (index) {
    case 1: c.n1 = 4096; c.n2 = 2048; c.workers = 8; break;
    case 2: c.n1 = 4096; c.n2 = 2048; c.workers = 4; break;
    case 3: c.n1 = 20000; c.n2 = 30000; c.workers = 8; break;
    case 4: c.n1 = 20000; c.n2 = 30000; c.workers = 6; break;
    default: Invalid(fmt::format("unknown scenario {} (valid: 1-4)", index));
  }
  c.name = fmt::format("scenario{}", index);
  c.n1 = Scaled(c.n1, scale);
  c.n2 = Scaled(c.n2, scale);
  return c;
}

void ValidateScenario(const ScenarioConfig& c) {
  if (c.n1 < 1 || c.n2 < 1) Invalid("N1 and N2 must be >= 1");
  if (c.workers < 1) Invalid("P (workers) must be >= 1");
  if (!(c.mu_min > 0.0) || !(c.mu_max >= c.mu_min)) {
    Invalid("mu range must satisfy 0 < mu_min <= mu_max");
  }
  if (!(c.load_constant > 0.0)) Invalid("load constant C must be > 0");
  if (!(c.init_box_m >= 0.0)) Invalid("initial box half-width must be >= 0");
  if (!(c.max_speed_mps >= 0.0)) Invalid("max speed must be >= 0");
  ValidateCommParams(c.comm);
  const auto& st = c.straggler;
  if (!(st.ratio >= 0.0 && st.ratio <= 1.0)) {
    Invalid(fmt::format("straggler ratio must lie in [0, 1], got {}", st.ratio));
  }
  if (!(st.delay_factor >= 1.0)) Invalid("delay factor must be >= 1");
  if (!(st.event_time >= 0.0)) Invalid("straggler event time must be >= 0");
  if (!(c.join_time >= 0.0)) Invalid("join time must be >= 0");
  if (!(c.horizon_factor > 1.0)) Invalid("horizon factor must be > 1");
  if (!(c.decode_seconds_per_op >= 0.0)) Invalid("decode cost must be >= 0");
  if (c.b > c.n2) Invalid(fmt::format("b={} exceeds N2={}", c.b, c.n2));
  if (c.s > std::min(c.n1, c.n2)) {
    Invalid(fmt::format("s={} exceeds min(N1, N2)={}", c.s, std::min(c.n1, c.n2)));
  }
  if (c.repetitions < 1) Invalid("repetitions must be >= 1");
}

std::size_t DefaultPieceLength(const ScenarioConfig& c) {
  return (c.n2 + c.workers - 1) / c.workers;
}

std::vector<WorkerProfile> DrawWorkers(const ScenarioConfig& c, std::uint64_t seed,
                                       std::optional<std::size_t> straggler_count) {
  const std::size_t total = c.workers + c.late_workers;
  std::vector<WorkerProfile> workers(total);
  for (std::size_t i = 0; i < total; ++i) {
    auto& w = workers[i];
    w.id = static_cast<int>(i);
    CounterRng params(seed, StreamPurpose::kWorkerParams, i);
    w.mu = params.Uniform(c.mu_min, c.mu_max);
    w.alpha = 1.0 / w.mu;
    CounterRng place(seed, StreamPurpose::kInitialPosition, i);
    w.position = {place.Uniform(-c.init_box_m, c.init_box_m),
                  place.Uniform(-c.init_box_m, c.init_box_m)};
    w.velocity = {place.Uniform(-c.max_speed_mps, c.max_speed_mps),
                  place.Uniform(-c.max_speed_mps, c.max_speed_mps)};
    if (i >= c.workers) w.behavior = behavior::JoinsAt{c.join_time};
  }

  const std::size_t count =
      straggler_count
          ? std::min(*straggler_count, c.workers)
          : static_cast<std::size_t>(std::llround(c.straggler.ratio *
                                                  static_cast<double>(c.workers)));
  if (count > 0) {
    // Fisher-Yates; the first `count` entries are the stragglers, so sets for
    // increasing counts under one seed are nested.
    std::vector<std::size_t> order(c.workers);
    std::iota(order.begin(), order.end(), 0);
    CounterRng pick(seed, StreamPurpose::kStragglerSelection, 0);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const auto j = i + static_cast<std::size_t>(pick.Below(order.size() - i));
      std::swap(order[i], order[j]);
    }
    for (std::size_t i = 0; i < count; ++i) {
      workers[order[i]].behavior = StragglerFor(c.straggler);
    }
  }
  return workers;
}

std::pair<RealVector, RealVector> DrawTask(const ScenarioConfig& c,
                                           std::uint64_t seed) {
  CounterRng rng(seed, StreamPurpose::kTaskData, 0);
  RealVector a(c.n1), x(c.n2);
  for (auto& v : a) v = rng.Uniform(-1.0, 1.0);
  for (auto& v : x) v = rng.Uniform(-1.0, 1.0);
  return {std::move(a), std::move(x)};
}

std::vector<ComputeProfile> ComputeProfiles(const std::vector<WorkerProfile>& workers,
                                            std::size_t count) {
  std::vector<ComputeProfile> out;
  for (std::size_t i = 0; i < std::min(count, workers.size()); ++i) {
    out.push_back({workers[i].mu, workers[i].alpha});
  }
  return out;
}

namespace {

struct SingleRun {
  StrategyOutcome outcome;
  std::vector<SimEvent> log;
  std::size_t dropped = 0;
  std::size_t in_flight = 0;
  std::size_t delivered = 0;
  std::vector<SimEngine::ComputeDraw> draws;
};

SingleRun RunOnce(const ScenarioConfig& c, StrategyKind strategy, std::uint64_t seed,
                  std::vector<WorkerProfile> workers, const TaskSpec& task,
                  double horizon, bool record, bool payload) {
  CounterRng place(seed, StreamPurpose::kInitialPosition, kMasterEntity);
  const Vec2 master_pos{place.Uniform(-c.init_box_m, c.init_box_m),
                        place.Uniform(-c.init_box_m, c.init_box_m)};
  const Vec2 master_vel{place.Uniform(-c.max_speed_mps, c.max_speed_mps),
                        place.Uniform(-c.max_speed_mps, c.max_speed_mps)};
  EngineOptions opts;
  opts.comm = c.comm;
  opts.load_constant = c.load_constant;
  opts.max_speed_mps = c.max_speed_mps;
  opts.compute_payload = payload;
  opts.record_events = record;
  opts.horizon = horizon;
  SimEngine engine(std::move(workers), master_pos, master_vel, opts, seed);
  SingleRun run;
  run.outcome = RunStrategy(strategy, task, engine);
  run.log = engine.event_log();
  run.dropped = engine.pieces_dropped();
  run.in_flight = engine.in_flight();
  run.delivered = engine.results_delivered();
  run.draws = engine.compute_draws();
  return run;
}

bool AllNormal(const std::vector<WorkerProfile>& workers) {
  return std::all_of(workers.begin(), workers.end(), [](const WorkerProfile& w) {
    return std::holds_alternative<behavior::Normal>(w.behavior);
  });
}

}  // namespace

EpisodeMetrics RunEpisode(const ScenarioConfig& c, StrategyKind strategy,
                          std::uint64_t seed, const EpisodeOptions& options) {
  ValidateScenario(c);
  const auto started = std::chrono::steady_clock::now();

  EpisodeMetrics m;
  m.strategy = strategy;
  m.rng_seed = seed;
  m.workers = DrawWorkers(c, seed, options.straggler_count);

  auto [a, x] = DrawTask(c, seed);
  TaskSpec task;
  task.a = std::make_shared<const RealVector>(std::move(a));
  task.x = std::make_shared<const RealVector>(std::move(x));
  task.decode_seconds_per_op = c.decode_seconds_per_op;
  task.b = c.b != 0 ? c.b : DefaultPieceLength(c);
  task.s = c.s != 0 ? c.s
                    : SelectS(c.n1, c.n2, c.workers, ComputeProfiles(m.workers, c.workers),
                              c.load_constant);
  m.b = task.b;
  m.s = task.s;

  double horizon = std::numeric_limits<double>::infinity();
  if (!AllNormal(m.workers)) {
    ScenarioConfig pilot_cfg = c;
    pilot_cfg.late_workers = 0;
    auto pilot_workers = DrawWorkers(pilot_cfg, seed, std::size_t{0});
    const SingleRun pilot = RunOnce(pilot_cfg, strategy, seed, std::move(pilot_workers),
                                    task, horizon, false, false);
    if (!pilot.outcome.success) {
      Fail(ErrorCode::kRuntime, "straggler-free pilot episode did not complete");
    }
    horizon = c.horizon_factor * pilot.outcome.completion_time;
  }
  SingleRun run = RunOnce(c, strategy, seed, m.workers, task, horizon,
                          options.record_events, c.compute_payload);
  m.horizon = horizon;
  m.outcome = std::move(run.outcome);
  m.event_log = std::move(run.log);
  m.pieces_dropped = run.dropped;
  m.in_flight = run.in_flight;
  m.results_delivered = run.delivered;
  m.compute_draws = std::move(run.draws);
  m.wall_runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return m;
}

}  // namespace dyncc
