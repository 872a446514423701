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
#include <algorithm>

#include "strategy_common.hpp"

namespace dyncc {
namespace {

// Master loop of the dynamic coded strategy.
//
// Start: k = 1, encode rows 0..m (m = ceil(N2/b)) into the stack, pop one
// piece to every worker in range. Then, whenever anything happens (a result,
// a dispatch timer, a worker joining), run passes of
//
//   for each worker j:
//     if |S| <= 1: k += 1, push the piece for row m + k - 1
//     if now >= t^s_j + T_j: pop a piece and send it to j
//
// until a pass sends nothing. T_j only exists once j has returned a result,
// so a worker holding its first piece waits for that result. A worker that
// has never been sent anything (joined late, or the initial stack ran out)
// is available at once.
class DynamicMaster final : public Master {
 public:
  explicit DynamicMaster(const TaskSpec& task)
      : task_(task),
        pieces_needed_((task.n2() + task.b - 1) / task.b),
        estimator_(0.0, 0.0) {}

  void OnStart(SimEngine& engine) override {
    payload_ = engine.options().compute_payload;
    load_ = ComputeLoad(task_.n1(), task_.b, engine.options().load_constant);
    const double unit = engine.options().comm.bytes_per_number;
    estimator_ = DispatchEstimator(static_cast<double>(task_.b) * unit,
                                   static_cast<double>(result_len()) * unit);
    if (payload_) {
      partition_.emplace(MakePartition(*task_.x, task_.b));
      a_shared_ = task_.a;
    }
    encoding_.emplace(MakeEncodingMatrix(2 * pieces_needed_ + 8, pieces_needed_));
    for (std::size_t row = 0; row < pieces_needed_ + k_; ++row) Push(row);

    for (int j : engine.VisibleWorkers()) {
      nodes_.push_back(j);
      state_[j] = {};
      if (!stack_.empty()) SendTo(engine, j);
    }
    Loop(engine);
  }

  void OnResult(SimEngine& engine, Delivery delivery) override {
    if (done_) return;
    estimator_.Observe(delivery.worker, delivery.sent, delivery.received, delivery.rtt);
    state_[delivery.worker].interval =
        EstimateDispatchInterval(estimator_, delivery.worker);
    received_.push_back(CodedPiece{static_cast<std::size_t>(delivery.row),
                                   delivery.result ? std::move(*delivery.result)
                                                   : RealVector{}});
    if (received_.size() == pieces_needed_) {
      Finalize(engine);
      return;
    }
    Loop(engine);
  }

  void OnWorkerJoined(SimEngine& engine, int worker) override {
    if (done_) return;
    if (std::find(nodes_.begin(), nodes_.end(), worker) == nodes_.end()) {
      nodes_.push_back(worker);
      state_[worker] = {};
    }
    Loop(engine);
  }

  void OnTimer(SimEngine& engine, int worker) override {
    if (done_) return;
    state_[worker].timer_at.reset();
    Loop(engine);
  }

  bool Done() const override { return done_; }
  double done_time() const { return done_time_; }
  std::size_t redundancy() const { return k_; }
  std::optional<RealVector>& result() { return result_; }

 private:
  struct NodeState {
    std::optional<double> last_send;  // t^s of the latest piece sent
    std::optional<double> interval;   // T_j, once a result came back
    std::optional<double> timer_at;
  };
  struct StackEntry {
    std::size_t row;
    std::shared_ptr<const RealVector> data;
  };

  std::size_t result_len() const { return task_.n1() + task_.b - 1; }

  void Push(std::size_t row) {
    if (row >= encoding_->rows()) {
      encoding_.emplace(MakeEncodingMatrix(2 * encoding_->rows(), pieces_needed_));
    }
    StackEntry entry{row, nullptr};
    if (payload_) entry.data = internal::Share(MdsEncode(*partition_, *encoding_, row).data);
    stack_.push_back(std::move(entry));
  }

  void SendTo(SimEngine& engine, int worker) {
    StackEntry entry = std::move(stack_.back());
    stack_.pop_back();
    PieceOrder order;
    order.worker = worker;
    order.row = static_cast<std::int64_t>(entry.row);
    order.numbers_in = task_.b;  // a is pre-stored at every worker
    order.numbers_out = result_len();
    order.load = load_;
    order.lhs = a_shared_;
    order.rhs = std::move(entry.data);
    engine.Send(std::move(order));
    state_[worker].last_send = engine.now();
  }

  bool Eligible(const SimEngine& engine, int worker) const {
    const auto& st = state_.at(worker);
    if (!st.last_send) return true;
    if (!st.interval) return false;
    return engine.now() >= *st.last_send + *st.interval;
  }

  void Loop(SimEngine& engine) {
    bool sent = true;
    while (sent && !done_) {
      sent = false;
      for (int j : nodes_) {
        if (stack_.size() <= 1) {
          ++k_;
          const std::size_t row = pieces_needed_ + k_ - 1;
          Push(row);
          engine.Mark(EventKind::kStackRefill, -1, static_cast<std::int64_t>(row),
                      task_.b);
        }
        if (Eligible(engine, j)) {
          SendTo(engine, j);
          sent = true;
        }
      }
    }
    ArmTimers(engine);
  }

  void ArmTimers(SimEngine& engine) {
    for (int j : nodes_) {
      auto& st = state_[j];
      if (!st.last_send || !st.interval) continue;
      const double due = *st.last_send + *st.interval;
      if (due <= engine.now()) continue;
      if (st.timer_at && *st.timer_at == due) continue;
      engine.ScheduleTimer(j, due);
      st.timer_at = due;
    }
  }

  void Finalize(SimEngine& engine) {
    done_ = true;
    const double ops = static_cast<double>(pieces_needed_ * pieces_needed_ *
                                           result_len());
    done_time_ = engine.now() + task_.decode_seconds_per_op * ops;
    if (!payload_) return;
    const auto blocks = MdsDecode(received_, *encoding_);
    RealVector full = OverlapAdd(blocks, task_.b,
                                 (pieces_needed_ - 1) * task_.b + result_len());
    full.resize(task_.n1() + task_.n2() - 1);
    result_ = std::move(full);
  }

  const TaskSpec& task_;
  const std::size_t pieces_needed_;
  std::size_t k_ = 1;
  bool payload_ = false;
  double load_ = 0.0;
  DispatchEstimator estimator_;
  std::optional<Partition> partition_;
  std::optional<EncodingMatrix> encoding_;
  std::shared_ptr<const RealVector> a_shared_;
  std::vector<StackEntry> stack_;
  std::vector<int> nodes_;
  std::map<int, NodeState> state_;
  std::vector<CodedPiece> received_;
  bool done_ = false;
  double done_time_ = 0.0;
  std::optional<RealVector> result_;
};

}  // namespace

StrategyOutcome RunDynamic(const TaskSpec& task, SimEngine& engine) {
  internal::ValidateTask(task);
  if (task.b < 1 || task.b > task.n2()) {
    Fail(ErrorCode::kInvalidArgument, "dynamic strategy needs 1 <= b <= N2");
  }
  DynamicMaster master(task);
  const RunResult run = engine.Run(master);
  StrategyOutcome out;
  out.result = std::move(master.result());
  out.redundancy_used = master.redundancy();
  internal::Finish(out, engine, run, master.done_time());
  return out;
}

}  // namespace dyncc
