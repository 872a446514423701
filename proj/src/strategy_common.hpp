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

#include <cmath>

#include "dyncc/error.hpp"
#include "dyncc/strategies.hpp"

namespace dyncc::internal {

inline void ValidateTask(const TaskSpec& task) {
  Require(task.a && task.x, "task vectors are missing");
  Require(!task.a->empty() && !task.x->empty(), "task vectors must be non-empty");
  Require(task.decode_seconds_per_op >= 0.0, "decode cost must be >= 0");
}

inline std::shared_ptr<const RealVector> Share(RealVector v) {
  return std::make_shared<const RealVector>(std::move(v));
}

// Fills the fields every strategy reports the same way. A run that never
// finished is reported at the horizon when one is set.
inline void Finish(StrategyOutcome& out, const SimEngine& engine, const RunResult& run,
                   double done_time) {
  out.success = run.done;
  if (run.done) {
    out.completion_time = done_time;
  } else {
    const double horizon = engine.options().horizon;
    out.completion_time = std::isfinite(horizon) ? horizon : run.end_time;
    out.result.reset();
  }
  out.pieces_dispatched = engine.pieces_sent();
  const auto& counts = engine.results_per_worker();
  for (std::size_t w = 0; w < counts.size(); ++w) {
    if (counts[w] > 0) out.per_worker_results[static_cast<int>(w)] = counts[w];
  }
}

}  // namespace dyncc::internal
