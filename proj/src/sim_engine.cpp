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
#include "dyncc/sim_engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <ostream>

#include "dyncc/error.hpp"

namespace dyncc {
namespace {

// Ticks and departures never create work, so they must not keep a stalled
// episode alive.
bool IsWork(EventKind kind) {
  return kind != EventKind::kClockTick && kind != EventKind::kWorkerLeaves &&
         kind != EventKind::kWorkerFails;
}

// Distances are floored at one meter so the path-loss model stays finite.
constexpr double kMinDistance = 1.0;

}  // namespace

const char* ToString(EventKind kind) {
  switch (kind) {
    case EventKind::kPieceSent: return "piece_sent";
    case EventKind::kPieceArrives: return "piece_arrives";
    case EventKind::kComputeDone: return "compute_done";
    case EventKind::kResultArrives: return "result_arrives";
    case EventKind::kPieceDropped: return "piece_dropped";
    case EventKind::kWorkerJoins: return "worker_joins";
    case EventKind::kWorkerLeaves: return "worker_leaves";
    case EventKind::kWorkerFails: return "worker_fails";
    case EventKind::kClockTick: return "clock_tick";
    case EventKind::kDispatchTimer: return "dispatch_timer";
    case EventKind::kStackRefill: return "stack_refill";
  }
  return "unknown";
}

std::uint64_t EventQueue::Schedule(SimEvent event) {
  if (event.time < now_) {
    Fail(ErrorCode::kInvalidArgument,
         fmt::format("cannot schedule an event at t={} before the clock ({})",
                     event.time, now_));
  }
  event.seq = next_seq_++;
  heap_.push(event);
  return event.seq;
}

std::optional<SimEvent> EventQueue::NextEvent() {
  if (heap_.empty()) return std::nullopt;
  SimEvent event = heap_.top();
  heap_.pop();
  now_ = event.time;
  return event;
}

SimEngine::SimEngine(std::vector<WorkerProfile> workers, Vec2 master_position,
                     Vec2 master_velocity, EngineOptions options,
                     std::uint64_t seed)
    : master_pos_(master_position),
      master_vel_(master_velocity),
      master_velocity_rng_(seed, StreamPurpose::kVelocity, kMasterEntity),
      noise_rng_(seed, StreamPurpose::kSignalNoise, 0),
      options_(std::move(options)) {
  ValidateCommParams(options_.comm);
  Require(options_.load_constant > 0.0, "load constant must be > 0");
  Require(options_.max_speed_mps >= 0.0, "max speed must be >= 0");
  workers_.reserve(workers.size());
  for (std::size_t i = 0; i < workers.size(); ++i) {
    auto& p = workers[i];
    Require(p.id == static_cast<int>(i), "worker ids must be 0..P-1 in order");
    Require(p.mu > 0.0 && p.alpha > 0.0, "worker mu and alpha must be > 0");
    Require(DelayFactor(p.behavior) >= 1.0, "delay factor must be >= 1");
    const auto entity = static_cast<std::uint64_t>(i);
    WorkerState state;
    state.profile = p;
    state.compute_rng = CounterRng(seed, StreamPurpose::kComputeTime, entity);
    state.velocity_rng = CounterRng(seed, StreamPurpose::kVelocity, entity);
    state.joined = JoinTime(p.behavior) <= 0.0;
    workers_.push_back(std::move(state));
  }
  results_per_worker_.assign(workers_.size(), 0);

  for (const auto& w : workers_) {
    if (!w.joined) {
      Schedule({JoinTime(w.profile.behavior), 0, EventKind::kWorkerJoins,
                w.profile.id});
    }
    if (auto departure = DepartureTime(w.profile.behavior)) {
      const auto kind = std::holds_alternative<behavior::FailedAt>(w.profile.behavior)
                            ? EventKind::kWorkerFails
                            : EventKind::kWorkerLeaves;
      Schedule({std::max(*departure, 0.0), 0, kind, w.profile.id});
    }
  }
  Schedule({1.0, 0, EventKind::kClockTick});
}

const WorkerProfile& SimEngine::profile(int worker) const {
  return workers_.at(static_cast<std::size_t>(worker)).profile;
}

Vec2 SimEngine::position(int worker) const {
  return workers_.at(static_cast<std::size_t>(worker)).profile.position;
}

std::vector<int> SimEngine::VisibleWorkers() const {
  std::vector<int> ids;
  for (const auto& w : workers_) {
    if (w.joined) ids.push_back(w.profile.id);
  }
  return ids;
}

bool SimEngine::Visible(int worker) const {
  return workers_.at(static_cast<std::size_t>(worker)).joined;
}

void SimEngine::Schedule(SimEvent event) {
  queue_.Schedule(event);
  if (IsWork(event.kind)) ++pending_work_;
}

void SimEngine::Record(const SimEvent& event) {
  if (options_.record_events) log_.push_back(event);
}

double SimEngine::Rate(Vec2 a, Vec2 b) {
  const double d = std::max(Distance(a, b), kMinDistance);
  double w = 0.0;
  if (options_.comm.model == SignalModel::kFull && options_.comm.noise_sigma_db > 0.0) {
    w = options_.comm.noise_sigma_db * noise_rng_.Normal();
  }
  return DataRate(d, options_.comm, w);
}

std::int64_t SimEngine::Send(PieceOrder order) {
  auto& w = workers_.at(static_cast<std::size_t>(order.worker));
  Require(w.joined, "cannot send to a worker that has not joined");
  const auto id = static_cast<std::int64_t>(pieces_.size());
  const double rate = Rate(master_pos_, w.profile.position);
  PieceRecord record;
  record.sent = now();
  record.inbound = CommTime(static_cast<double>(order.numbers_in),
                            options_.comm.bytes_per_number, rate);
  const int worker = order.worker;
  const auto row = order.row;
  const auto numbers_in = order.numbers_in;
  record.order = std::move(order);
  pieces_.push_back(std::move(record));

  Record({now(), 0, EventKind::kPieceSent, worker, id, row, numbers_in});
  Schedule({now() + pieces_.back().inbound, 0, EventKind::kPieceArrives, worker, id,
            row, numbers_in});
  return id;
}

void SimEngine::ScheduleTimer(int worker, double time) {
  Schedule({time, 0, EventKind::kDispatchTimer, worker});
}

void SimEngine::Mark(EventKind kind, int worker, std::int64_t row,
                     std::size_t payload) {
  Record({now(), 0, kind, worker, -1, row, payload});
}

void SimEngine::Drop(int worker, std::int64_t piece) {
  ++dropped_;
  pieces_[static_cast<std::size_t>(piece)].result.reset();
  Record({now(), 0, EventKind::kPieceDropped, worker, piece,
          pieces_[static_cast<std::size_t>(piece)].order.row, 0});
}

void SimEngine::OnPieceArrives(const SimEvent& event) {
  auto& w = workers_[static_cast<std::size_t>(event.worker)];
  const auto departure = DepartureTime(w.profile.behavior);
  if (w.gone || (departure && now() >= *departure)) {
    Drop(event.worker, event.piece);
    return;
  }
  w.waiting.push_back(event.piece);
  if (!w.busy) StartNext(event.worker);
}

void SimEngine::StartNext(int worker) {
  auto& w = workers_[static_cast<std::size_t>(worker)];
  while (!w.waiting.empty()) {
    const auto piece = w.waiting.front();
    w.waiting.pop_front();
    const auto& order = pieces_[static_cast<std::size_t>(piece)].order;
    const double nominal =
        SampleComputeTime(w.compute_rng, w.profile.mu, w.profile.alpha, order.load);
    compute_draws_.push_back({worker, piece, nominal});
    const auto duration = ApplyStraggler(w.profile.behavior, nominal, now());
    if (!duration) {
      Drop(worker, piece);
      continue;
    }
    w.busy = true;
    Schedule({now() + *duration, 0, EventKind::kComputeDone, worker, piece,
              order.row, order.numbers_out});
    return;
  }
  w.busy = false;
}

void SimEngine::OnComputeDone(const SimEvent& event) {
  auto& w = workers_[static_cast<std::size_t>(event.worker)];
  auto& record = pieces_[static_cast<std::size_t>(event.piece)];
  const double rate = Rate(master_pos_, w.profile.position);
  const double nominal = CommTime(static_cast<double>(record.order.numbers_out),
                                  options_.comm.bytes_per_number, rate);
  const auto duration = ApplyStraggler(w.profile.behavior, nominal, now());
  if (duration) {
    record.outbound = *duration;
    if (options_.compute_payload && record.order.lhs && record.order.rhs) {
      record.result = ConvolveFft(*record.order.lhs, *record.order.rhs);
    }
    Schedule({now() + *duration, 0, EventKind::kResultArrives, event.worker,
              event.piece, record.order.row, record.order.numbers_out});
  } else {
    Drop(event.worker, event.piece);
  }
  w.busy = false;
  StartNext(event.worker);
}

void SimEngine::OnTick() {
  const double speed = options_.max_speed_mps;
  master_pos_ = AdvancePosition(master_pos_, master_vel_, 1.0);
  master_vel_ = {master_velocity_rng_.Uniform(-speed, speed),
                 master_velocity_rng_.Uniform(-speed, speed)};
  for (auto& w : workers_) {
    w.profile.position = AdvancePosition(w.profile.position, w.profile.velocity, 1.0);
    w.profile.velocity = {w.velocity_rng.Uniform(-speed, speed),
                          w.velocity_rng.Uniform(-speed, speed)};
  }
}

RunResult SimEngine::Run(Master& master) {
  master_ = &master;
  master.OnStart(*this);
  if (master.Done()) return {true, now()};

  while (!queue_.empty() && pending_work_ > 0) {
    if (queue_.PeekTime() > options_.horizon) break;
    const SimEvent event = *queue_.NextEvent();
    if (IsWork(event.kind)) --pending_work_;
    Record(event);

    switch (event.kind) {
      case EventKind::kPieceArrives:
        OnPieceArrives(event);
        break;
      case EventKind::kComputeDone:
        OnComputeDone(event);
        break;
      case EventKind::kResultArrives: {
        auto& record = pieces_[static_cast<std::size_t>(event.piece)];
        ++delivered_;
        ++results_per_worker_[static_cast<std::size_t>(event.worker)];
        Delivery delivery{event.piece,   event.worker,
                          event.row,     record.sent,
                          now(),         record.inbound + record.outbound,
                          std::move(record.result)};
        record.result.reset();
        master.OnResult(*this, std::move(delivery));
        break;
      }
      case EventKind::kWorkerJoins:
        workers_[static_cast<std::size_t>(event.worker)].joined = true;
        master.OnWorkerJoined(*this, event.worker);
        break;
      case EventKind::kWorkerLeaves:
      case EventKind::kWorkerFails: {
        auto& w = workers_[static_cast<std::size_t>(event.worker)];
        w.gone = true;
        while (!w.waiting.empty()) {
          Drop(event.worker, w.waiting.front());
          w.waiting.pop_front();
        }
        break;
      }
      case EventKind::kClockTick:
        OnTick();
        Schedule({now() + 1.0, 0, EventKind::kClockTick});
        break;
      case EventKind::kDispatchTimer:
        master.OnTimer(*this, event.worker);
        break;
      case EventKind::kPieceSent:
      case EventKind::kPieceDropped:
      case EventKind::kStackRefill:
        break;
    }
    if (master.Done()) return {true, now()};
  }
  return {false, now()};
}

void WriteEventLog(std::ostream& out, const std::vector<SimEvent>& log) {
  out << "time_s,kind,worker,piece,row,payload_numbers\n";
  for (const auto& e : log) {
    out << fmt::format("{:.9g},{},{},{},{},{}\n", e.time, ToString(e.kind), e.worker,
                       e.piece, e.row, e.payload);
  }
}

}  // namespace dyncc
