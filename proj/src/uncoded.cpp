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

class UncodedMaster final : public Master {
 public:
  explicit UncodedMaster(const TaskSpec& task) : task_(task) {}

  void OnStart(SimEngine& engine) override {
    const auto workers = engine.VisibleWorkers();
    if (workers.empty()) return;
    const std::size_t s = UncodedBlockLength(task_.n1(), task_.n2(), workers.size());
    a_len_ = std::min(s, task_.n1());
    x_len_ = std::min(s, task_.n2());
    const Partition pa = MakePartition(*task_.a, a_len_);
    const Partition px = MakePartition(*task_.x, x_len_);
    a_blocks_ = pa.size();
    x_blocks_ = px.size();
    partials_.assign(a_blocks_ * x_blocks_, RealVector{});
    have_.assign(partials_.size(), false);

    const bool payload = engine.options().compute_payload;
    std::vector<std::shared_ptr<const RealVector>> a_parts, x_parts;
    if (payload) {
      for (const auto& p : pa.pieces) a_parts.push_back(internal::Share(p));
      for (const auto& p : px.pieces) x_parts.push_back(internal::Share(p));
    }
    const double load = ComputeLoad(a_len_, x_len_, engine.options().load_constant);
    // Pair (i, j) goes to worker (i * x_blocks + j) mod P.
    for (std::size_t pair = 0; pair < partials_.size(); ++pair) {
      PieceOrder order;
      order.worker = workers[pair % workers.size()];
      order.row = static_cast<std::int64_t>(pair);
      order.numbers_in = a_len_ + x_len_;
      order.numbers_out = a_len_ + x_len_ - 1;
      order.load = load;
      if (payload) {
        order.lhs = a_parts[pair / x_blocks_];
        order.rhs = x_parts[pair % x_blocks_];
      }
      engine.Send(std::move(order));
    }
  }

  void OnResult(SimEngine& engine, Delivery delivery) override {
    const auto pair = static_cast<std::size_t>(delivery.row);
    if (have_[pair]) return;
    have_[pair] = true;
    ++received_;
    if (delivery.result) partials_[pair] = std::move(*delivery.result);
    if (received_ == partials_.size()) {
      done_time_ = engine.now();
      if (engine.options().compute_payload) Assemble();
      done_ = true;
    }
  }

  bool Done() const override { return done_; }
  double done_time() const { return done_time_; }
  std::optional<RealVector>& result() { return result_; }

 private:
  // Shifts each a_i * x_j by i*|a_i| + j*|x_j|: first along x within each a
  // block, then across a blocks.
  void Assemble() {
    std::vector<RealVector> rows;
    rows.reserve(a_blocks_);
    const std::size_t row_len = x_blocks_ * x_len_ + a_len_ - 1;
    for (std::size_t i = 0; i < a_blocks_; ++i) {
      std::span<const RealVector> row(partials_.data() + i * x_blocks_, x_blocks_);
      rows.push_back(OverlapAdd(row, x_len_, row_len));
    }
    RealVector full = OverlapAdd(rows, a_len_, (a_blocks_ - 1) * a_len_ + row_len);
    full.resize(task_.n1() + task_.n2() - 1);
    result_ = std::move(full);
  }

  const TaskSpec& task_;
  std::size_t a_len_ = 0, x_len_ = 0, a_blocks_ = 0, x_blocks_ = 0;
  std::vector<RealVector> partials_;
  std::vector<bool> have_;
  std::size_t received_ = 0;
  bool done_ = false;
  double done_time_ = 0.0;
  std::optional<RealVector> result_;
};

}  // namespace

StrategyOutcome RunUncoded(const TaskSpec& task, SimEngine& engine) {
  internal::ValidateTask(task);
  UncodedMaster master(task);
  const RunResult run = engine.Run(master);
  StrategyOutcome out;
  out.result = std::move(master.result());
  internal::Finish(out, engine, run, master.done_time());
  return out;
}

}  // namespace dyncc
