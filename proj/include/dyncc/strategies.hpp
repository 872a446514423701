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

// Distributed convolution strategies, each driving a SimEngine as the master:
//
//   uncoded      both vectors split into blocks of length s ~ sqrt(N1 N2 / P);
//                every (a_i, x_j) pair must come back.
//   traditional  a's blocks MDS-coded across workers; each x block (column)
//                decodes from any N1/s results.
//   dynamic      only x is split (length b) and coded; coded pieces are
//                popped from a stack and streamed to workers at estimated
//                dispatch intervals, with rows added on demand.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dyncc/conv_coding.hpp"
#include "dyncc/sim_engine.hpp"

namespace dyncc {

enum class StrategyKind { kUncoded, kTraditional, kDynamic };

const char* ToString(StrategyKind kind);
std::optional<StrategyKind> ParseStrategy(const std::string& name);

struct TaskSpec {
  std::shared_ptr<const RealVector> a;
  std::shared_ptr<const RealVector> x;
  std::size_t b = 0;  // dynamic piece length
  std::size_t s = 0;  // traditional block length
  // Master-side decode cost in seconds per multiply-add; 0 = free.
  double decode_seconds_per_op = 0.0;

  std::size_t n1() const { return a->size(); }
  std::size_t n2() const { return x->size(); }
};

struct StrategyOutcome {
  bool success = false;
  double completion_time = 0.0;
  std::optional<RealVector> result;
  std::size_t pieces_dispatched = 0;
  std::size_t redundancy_used = 0;  // k at termination; 0 for static schemes
  std::map<int, std::size_t> per_worker_results;
};

// ---------------------------------------------------------------------------
// Dispatch-interval estimation for the dynamic strategy.
//
// Per worker j, with i the index of the piece whose result just arrived:
//
//   t^c_{j,i} = t^r_{j,i} - B_r / (B_r + B_x) * RTT_j             (finish time)
//   t^u_{j,i} = t^u_{j,i-1} + max(0, RTT_j - t^r_{j,i-1} - t^s_{j,i})  (idle)
//   E[T^comp_{j,i}] = (t^c_{j,i} - t^u_{j,i}) / c_j
//   T_{j,i} = min(t^r_{j,i} - t^s_{j,i}, E[T^comp_{j,i}])
//
// The idle update is applied literally, with every quantity on the master's
// clock. Read as durations it would be the gap between the worker finishing
// piece i-1 and receiving piece i; read as written, with absolute timestamps,
// it is almost always clamped to zero. For the first result there is no
// t^r_{j,0} and the idle time stays 0.
struct WorkerTiming {
  double last_send = 0.0;       // t^s of the piece whose result arrived last
  double last_recv = 0.0;       // t^r of that result
  double previous_recv = 0.0;   // t^r before that (t^r_{j,i-1})
  double idle = 0.0;            // t^u
  std::size_t results = 0;      // c_j
  double rtt = 0.0;             // RTT_j
};

class DispatchEstimator {
 public:
  // Sizes of a coded input piece and of its result, in bytes.
  DispatchEstimator(double bytes_in, double bytes_out)
      : bytes_in_(bytes_in), bytes_out_(bytes_out) {}

  // Records a result from `worker` for a piece sent at `sent`.
  void Observe(int worker, double sent, double received, double rtt);

  const WorkerTiming& timing(int worker) const;
  WorkerTiming& timing(int worker) { return timings_[worker]; }
  bool HasResult(int worker) const;
  double bytes_in() const { return bytes_in_; }
  double bytes_out() const { return bytes_out_; }

 private:
  double bytes_in_;
  double bytes_out_;
  std::map<int, WorkerTiming> timings_;
};

// Finish-time estimate t^c for the worker's latest result.
double EstimateFinishTime(const DispatchEstimator& est, int worker);

// Applies the idle-time update, then returns T_{j,i} (> 0). Throws
// kNotReady if the worker has not returned anything yet.
double EstimateDispatchInterval(DispatchEstimator& est, int worker);

// ---------------------------------------------------------------------------
// Block length for the traditional scheme: the integer s in
// [ceil(sqrt(N1 N2 / P)), min(N1, N2)] maximizing |eps(s)|, with
//
//   eps(s) = -sum_j (P s / N2 - N1 / s + 1) mu_j^alpha_j
//                   / (P * c(s, s)^alpha_j),   c(s, s) = C (2s) log2(2s).
//
// Ties go to the smallest s. Throws kInvalidArgument on an empty range.
struct ComputeProfile {
  double mu = 1.0;
  double alpha = 1.0;
};
double SelectionObjective(std::size_t n1, std::size_t n2, std::size_t s,
                          std::span<const ComputeProfile> profiles,
                          double load_constant);
std::size_t SelectS(std::size_t n1, std::size_t n2, std::size_t workers,
                    std::span<const ComputeProfile> profiles, double load_constant);

// s = round(sqrt(N1 N2 / P)), clamped to [1, max(N1, N2)].
std::size_t UncodedBlockLength(std::size_t n1, std::size_t n2, std::size_t workers);

// Node failures the traditional scheme tolerates: P - N1 N2 / s^2.
double TraditionalFailureBound(std::size_t n1, std::size_t n2, std::size_t workers,
                               std::size_t s);

// Layout of the traditional scheme over `workers` present workers: worker w
// handles column w % columns with coded row w / columns.
struct TraditionalLayout {
  std::size_t a_blocks = 0;  // N1/s rounded up: results needed per column
  std::size_t columns = 0;   // N2/s rounded up
  std::vector<std::size_t> workers_per_column;
};
TraditionalLayout MakeTraditionalLayout(std::size_t n1, std::size_t n2,
                                        std::size_t workers, std::size_t s);

StrategyOutcome RunUncoded(const TaskSpec& task, SimEngine& engine);
StrategyOutcome RunTraditionalCoded(const TaskSpec& task, SimEngine& engine);
StrategyOutcome RunDynamic(const TaskSpec& task, SimEngine& engine);

StrategyOutcome RunStrategy(StrategyKind kind, const TaskSpec& task,
                            SimEngine& engine);

}  // namespace dyncc
