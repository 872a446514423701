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

// Deterministic discrete-event kernel for one master and a set of mobile
// workers. The engine owns the clock, the event queue and everything that
// happens on the worker side (transfers, queueing, compute, stragglers);
// a Master implementation reacts to deliveries and timers.

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "dyncc/conv_coding.hpp"
#include "dyncc/rng.hpp"
#include "dyncc/sim_models.hpp"

namespace dyncc {

enum class EventKind {
  kPieceSent,
  kPieceArrives,
  kComputeDone,
  kResultArrives,
  kPieceDropped,
  kWorkerJoins,
  kWorkerLeaves,
  kWorkerFails,
  kClockTick,
  kDispatchTimer,
  kStackRefill,
};

const char* ToString(EventKind kind);

struct SimEvent {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kClockTick;
  int worker = -1;
  std::int64_t piece = -1;
  std::int64_t row = -1;
  std::size_t payload = 0;  // numbers carried, where meaningful
};

// Min-queue on (time, seq). The clock advances to each dequeued event.
class EventQueue {
 public:
  // Assigns and returns the event's seq. Throws kInvalidArgument if the
  // event lies before the current clock.
  std::uint64_t Schedule(SimEvent event);
  // nullopt once the queue is empty.
  std::optional<SimEvent> NextEvent();

  double now() const { return now_; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  // Earliest pending time; requires !empty().
  double PeekTime() const { return heap_.top().time; }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
  std::uint64_t next_seq_ = 0;
  double now_ = 0.0;
};

struct WorkerProfile {
  int id = 0;
  Vec2 position;
  Vec2 velocity;
  double mu = 1.0;     // straggling parameter
  double alpha = 1.0;  // shift parameter
  StragglerBehavior behavior = behavior::Normal{};
};

// One unit of work handed to a worker. The worker returns lhs * rhs.
struct PieceOrder {
  int worker = 0;
  std::int64_t row = 0;  // encoding row, or pair index for uncoded work
  std::size_t numbers_in = 0;
  std::size_t numbers_out = 0;
  double load = 0.0;
  // Payload, only consulted when the engine computes real results.
  std::shared_ptr<const RealVector> lhs;
  std::shared_ptr<const RealVector> rhs;
};

struct Delivery {
  std::int64_t piece = 0;
  int worker = 0;
  std::int64_t row = 0;
  double sent = 0.0;
  double received = 0.0;
  double rtt = 0.0;  // transport only: inbound + outbound transfer
  std::optional<RealVector> result;
};

class SimEngine;

class Master {
 public:
  virtual ~Master() = default;
  virtual void OnStart(SimEngine& engine) = 0;
  virtual void OnResult(SimEngine& engine, Delivery delivery) = 0;
  virtual void OnWorkerJoined(SimEngine& engine, int worker) {
    (void)engine;
    (void)worker;
  }
  virtual void OnTimer(SimEngine& engine, int worker) {
    (void)engine;
    (void)worker;
  }
  virtual bool Done() const = 0;
};

struct EngineOptions {
  CommParams comm;
  double load_constant = 1.0;
  double max_speed_mps = 10.0;
  bool compute_payload = false;
  bool record_events = false;
  double horizon = std::numeric_limits<double>::infinity();
};

struct RunResult {
  bool done = false;
  double end_time = 0.0;
};

class SimEngine {
 public:
  SimEngine(std::vector<WorkerProfile> workers, Vec2 master_position,
            Vec2 master_velocity, EngineOptions options, std::uint64_t seed);

  double now() const { return queue_.now(); }
  const EngineOptions& options() const { return options_; }
  std::size_t worker_count() const { return workers_.size(); }
  const WorkerProfile& profile(int worker) const;
  Vec2 position(int worker) const;
  Vec2 master_position() const { return master_pos_; }

  // Workers the master currently knows about, in id order.
  std::vector<int> VisibleWorkers() const;
  bool Visible(int worker) const;

  // Dispatches a piece at the current time. Returns its id.
  std::int64_t Send(PieceOrder order);
  // Calls Master::OnTimer(worker) at `time` (>= now).
  void ScheduleTimer(int worker, double time);
  // Adds a master-side marker (e.g. stack refill) to the log.
  void Mark(EventKind kind, int worker, std::int64_t row, std::size_t payload);

  RunResult Run(Master& master);

  const std::vector<SimEvent>& event_log() const { return log_; }
  std::size_t pieces_sent() const { return pieces_.size(); }
  std::size_t results_delivered() const { return delivered_; }
  std::size_t pieces_dropped() const { return dropped_; }
  std::size_t in_flight() const { return pieces_.size() - delivered_ - dropped_; }
  // Results delivered per worker, indexed by worker id.
  const std::vector<std::size_t>& results_per_worker() const {
    return results_per_worker_;
  }
  // Every compute-time draw, in order, for audits.
  struct ComputeDraw {
    int worker;
    std::int64_t piece;
    double nominal;
  };
  const std::vector<ComputeDraw>& compute_draws() const { return compute_draws_; }

 private:
  struct PieceRecord {
    PieceOrder order;
    double sent = 0.0;
    double inbound = 0.0;
    double outbound = 0.0;
    std::optional<RealVector> result;
  };
  struct WorkerState {
    WorkerProfile profile;
    CounterRng compute_rng;
    CounterRng velocity_rng;
    std::deque<std::int64_t> waiting;
    bool busy = false;
    bool joined = true;
    bool gone = false;
  };

  void Schedule(SimEvent event);
  void Record(const SimEvent& event);
  double Rate(Vec2 a, Vec2 b);
  void OnPieceArrives(const SimEvent& event);
  void OnComputeDone(const SimEvent& event);
  void StartNext(int worker);
  void Drop(int worker, std::int64_t piece);
  void OnTick();

  std::vector<WorkerState> workers_;
  Vec2 master_pos_;
  Vec2 master_vel_;
  CounterRng master_velocity_rng_;
  CounterRng noise_rng_;
  EngineOptions options_;
  EventQueue queue_;
  std::size_t pending_work_ = 0;  // queued events other than clock ticks
  std::vector<PieceRecord> pieces_;
  std::vector<SimEvent> log_;
  std::vector<std::size_t> results_per_worker_;
  std::vector<ComputeDraw> compute_draws_;
  std::size_t delivered_ = 0;
  std::size_t dropped_ = 0;
  Master* master_ = nullptr;
};

// Writes `time_s,kind,worker,piece,row,payload_numbers`, one line per event.
void WriteEventLog(std::ostream& out, const std::vector<SimEvent>& log);

inline constexpr std::uint64_t kMasterEntity = std::uint64_t{1} << 32;

}  // namespace dyncc
