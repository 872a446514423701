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

class TraditionalMaster final : public Master {
 public:
  explicit TraditionalMaster(const TaskSpec& task) : task_(task) {}

  void OnStart(SimEngine& engine) override {
    const auto workers = engine.VisibleWorkers();
    if (workers.empty()) return;
    s_ = task_.s;
    layout_ = MakeTraditionalLayout(task_.n1(), task_.n2(), workers.size(), s_);
    const std::size_t max_rows = *std::max_element(layout_.workers_per_column.begin(),
                                                   layout_.workers_per_column.end());
    encoding_.emplace(MakeEncodingMatrix(max_rows, layout_.a_blocks));
    column_results_.assign(layout_.columns, {});
    column_sums_.assign(layout_.columns, RealVector{});
    column_done_.assign(layout_.columns, false);

    const bool payload = engine.options().compute_payload;
    std::vector<std::shared_ptr<const RealVector>> coded_a, x_parts;
    if (payload) {
      const Partition pa = MakePartition(*task_.a, s_);
      const Partition px = MakePartition(*task_.x, s_);
      for (std::size_t r = 0; r < max_rows; ++r) {
        coded_a.push_back(internal::Share(MdsEncode(pa, *encoding_, r).data));
      }
      for (const auto& p : px.pieces) x_parts.push_back(internal::Share(p));
    }
    const double load = ComputeLoad(s_, s_, engine.options().load_constant);
    for (std::size_t k = 0; k < workers.size(); ++k) {
      const std::size_t column = k % layout_.columns;
      const std::size_t row = k / layout_.columns;
      PieceOrder order;
      order.worker = workers[k];
      order.row = static_cast<std::int64_t>(row * layout_.columns + column);
      order.numbers_in = 2 * s_;
      order.numbers_out = 2 * s_ - 1;
      order.load = load;
      if (payload) {
        order.lhs = coded_a[row];
        order.rhs = x_parts[column];
      }
      engine.Send(std::move(order));
    }
  }

  void OnResult(SimEngine& engine, Delivery delivery) override {
    const auto tag = static_cast<std::size_t>(delivery.row);
    const std::size_t column = tag % layout_.columns;
    const std::size_t row = tag / layout_.columns;
    if (column_done_[column]) return;
    auto& results = column_results_[column];
    results.push_back(CodedPiece{row, delivery.result ? std::move(*delivery.result)
                                                      : RealVector{}});
    if (results.size() < layout_.a_blocks) return;

    column_done_[column] = true;
    ++columns_done_;
    const std::size_t block_out = 2 * s_ - 1;
    if (engine.options().compute_payload) {
      const auto blocks = MdsDecode(results, *encoding_);
      column_sums_[column] =
          OverlapAdd(blocks, s_, (layout_.a_blocks - 1) * s_ + block_out);
    }
    results.clear();
    if (columns_done_ == layout_.columns) {
      const double ops = static_cast<double>(layout_.a_blocks * layout_.a_blocks *
                                             block_out);
      done_time_ = engine.now() + task_.decode_seconds_per_op * ops;
      if (engine.options().compute_payload) {
        const std::size_t column_len = (layout_.a_blocks - 1) * s_ + block_out;
        RealVector full = OverlapAdd(column_sums_, s_,
                                     (layout_.columns - 1) * s_ + column_len);
        full.resize(task_.n1() + task_.n2() - 1);
        result_ = std::move(full);
      }
      done_ = true;
    }
  }

  bool Done() const override { return done_; }
  double done_time() const { return done_time_; }
  std::optional<RealVector>& result() { return result_; }

 private:
  const TaskSpec& task_;
  std::size_t s_ = 0;
  TraditionalLayout layout_;
  std::optional<EncodingMatrix> encoding_;
  std::vector<std::vector<CodedPiece>> column_results_;
  std::vector<RealVector> column_sums_;
  std::vector<bool> column_done_;
  std::size_t columns_done_ = 0;
  bool done_ = false;
  double done_time_ = 0.0;
  std::optional<RealVector> result_;
};

}  // namespace

StrategyOutcome RunTraditionalCoded(const TaskSpec& task, SimEngine& engine) {
  internal::ValidateTask(task);
  Require(task.s >= 1, "traditional coded strategy needs s >= 1");
  TraditionalMaster master(task);
  const RunResult run = engine.Run(master);
  StrategyOutcome out;
  out.result = std::move(master.result());
  internal::Finish(out, engine, run, master.done_time());
  return out;
}

}  // namespace dyncc
