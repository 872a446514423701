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
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "dyncc/error.hpp"
#include "dyncc/sim_models.hpp"
#include "dyncc/strategies.hpp"

namespace dyncc {

const char* ToString(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kUncoded: return "uncoded";
    case StrategyKind::kTraditional: return "coded";
    case StrategyKind::kDynamic: return "dynamic";
  }
  return "unknown";
}

std::optional<StrategyKind> ParseStrategy(const std::string& name) {
  if (name == "uncoded") return StrategyKind::kUncoded;
  if (name == "coded" || name == "traditional") return StrategyKind::kTraditional;
  if (name == "dynamic") return StrategyKind::kDynamic;
  return std::nullopt;
}

void DispatchEstimator::Observe(int worker, double sent, double received,
                                double rtt) {
  Require(received >= sent, "result received before it was sent");
  Require(rtt > 0.0, "round-trip time must be > 0");
  auto& t = timings_[worker];
  t.previous_recv = t.last_recv;
  t.last_send = sent;
  t.last_recv = received;
  t.rtt = rtt;
  ++t.results;
}

const WorkerTiming& DispatchEstimator::timing(int worker) const {
  const auto it = timings_.find(worker);
  if (it == timings_.end()) {
    Fail(ErrorCode::kNotReady, fmt::format("worker {} has no results yet", worker));
  }
  return it->second;
}

bool DispatchEstimator::HasResult(int worker) const {
  const auto it = timings_.find(worker);
  return it != timings_.end() && it->second.results > 0;
}

double EstimateFinishTime(const DispatchEstimator& est, int worker) {
  const auto& t = est.timing(worker);
  const double share = est.bytes_out() / (est.bytes_out() + est.bytes_in());
  return t.last_recv - share * t.rtt;
}

double EstimateDispatchInterval(DispatchEstimator& est, int worker) {
  if (!est.HasResult(worker)) {
    Fail(ErrorCode::kNotReady, fmt::format("worker {} has no results yet", worker));
  }
  auto& t = est.timing(worker);
  const double finish = EstimateFinishTime(est, worker);
  if (t.results > 1) {
    t.idle += std::max(0.0, t.rtt - t.previous_recv - t.last_send);
  }
  const double expected_compute =
      (finish - t.idle) / static_cast<double>(t.results);
  const double service = t.last_recv - t.last_send;
  // A non-positive compute estimate carries no information; fall back to the
  // observed service time so the interval stays positive.
  if (!(expected_compute > 0.0)) return service;
  return std::min(service, expected_compute);
}

double SelectionObjective(std::size_t n1, std::size_t n2, std::size_t s,
                          std::span<const ComputeProfile> profiles,
                          double load_constant) {
  Require(s >= 1 && n1 >= 1 && n2 >= 1, "SelectionObjective: sizes must be >= 1");
  const double p = static_cast<double>(profiles.size());
  const double sd = static_cast<double>(s);
  const double redundancy =
      p * sd / static_cast<double>(n2) - static_cast<double>(n1) / sd + 1.0;
  const double load = ComputeLoad(s, s, load_constant);
  double eps = 0.0;
  for (const auto& prof : profiles) {
    eps -= redundancy * std::pow(prof.mu, prof.alpha) /
           (p * std::pow(load, prof.alpha));
  }
  return eps;
}

std::size_t SelectS(std::size_t n1, std::size_t n2, std::size_t workers,
                    std::span<const ComputeProfile> profiles, double load_constant) {
  Require(workers >= 1, "SelectS: need at least one worker");
  Require(profiles.size() == workers, "SelectS: one profile per worker required");
  const double lower_real =
      std::sqrt(static_cast<double>(n1) * static_cast<double>(n2) /
                static_cast<double>(workers));
  const auto lower = static_cast<std::size_t>(std::ceil(lower_real - 1e-9));
  const std::size_t upper = std::min(n1, n2);
  if (lower > upper || lower < 1) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("no block length in [{}, {}] for N1={} N2={} P={}", lower, upper,
                     n1, n2, workers));
  }
  std::size_t best = lower;
  double best_value = -1.0;
  for (std::size_t s = lower; s <= upper; ++s) {
    const double value = std::abs(SelectionObjective(n1, n2, s, profiles, load_constant));
    if (value > best_value) {
      best_value = value;
      best = s;
    }
  }
  return best;
}

std::size_t UncodedBlockLength(std::size_t n1, std::size_t n2, std::size_t workers) {
  Require(workers >= 1, "need at least one worker");
  const double s = std::round(std::sqrt(static_cast<double>(n1) *
                                        static_cast<double>(n2) /
                                        static_cast<double>(workers)));
  return std::clamp<std::size_t>(static_cast<std::size_t>(s), 1, std::max(n1, n2));
}

double TraditionalFailureBound(std::size_t n1, std::size_t n2, std::size_t workers,
                               std::size_t s) {
  const double sd = static_cast<double>(s);
  return static_cast<double>(workers) -
         static_cast<double>(n1) * static_cast<double>(n2) / (sd * sd);
}

TraditionalLayout MakeTraditionalLayout(std::size_t n1, std::size_t n2,
                                        std::size_t workers, std::size_t s) {
  if (s < 1 || s > std::min(n1, n2)) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("block length s={} must lie in [1, min(N1, N2)={}]", s,
                     std::min(n1, n2)));
  }
  TraditionalLayout layout;
  layout.a_blocks = (n1 + s - 1) / s;
  layout.columns = (n2 + s - 1) / s;
  layout.workers_per_column.assign(layout.columns, 0);
  for (std::size_t w = 0; w < workers; ++w) {
    ++layout.workers_per_column[w % layout.columns];
  }
  const auto fewest = *std::min_element(layout.workers_per_column.begin(),
                                        layout.workers_per_column.end());
  if (fewest < layout.a_blocks) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("s={} needs {} workers per column for {} columns, but only {} "
                     "workers are present",
                     s, layout.a_blocks, layout.columns, workers));
  }
  return layout;
}

StrategyOutcome RunStrategy(StrategyKind kind, const TaskSpec& task,
                            SimEngine& engine) {
  switch (kind) {
    case StrategyKind::kUncoded: return RunUncoded(task, engine);
    case StrategyKind::kTraditional: return RunTraditionalCoded(task, engine);
    case StrategyKind::kDynamic: return RunDynamic(task, engine);
  }
  Fail(ErrorCode::kInvalidArgument, "unknown strategy");
}

}  // namespace dyncc
