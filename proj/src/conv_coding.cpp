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
#include "dyncc/conv_coding.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "dyncc/error.hpp"

namespace dyncc {
namespace {

// FFTW's planner is not re-entrant; execution on distinct plans is.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> FftwAlloc(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) Fail(ErrorCode::kRuntime, "fftw_malloc failed");
  return FftwBuffer<T>(p);
}

class Plan {
 public:
  explicit Plan(fftw_plan plan) : plan_(plan) {
    if (plan_ == nullptr) Fail(ErrorCode::kRuntime, "FFTW planning failed");
  }
  ~Plan() {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  void Execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

std::size_t NextFftSize(std::size_t n) {
  // FFTW is fast on 2^a 3^b 5^c 7^d; powers of two are enough here.
  std::size_t size = 1;
  while (size < n) size <<= 1;
  return size;
}

std::uint32_t BitReverse20(std::uint32_t v) {
  std::uint32_t r = 0;
  for (int i = 0; i < 20; ++i) {
    r = (r << 1) | (v & 1u);
    v >>= 1;
  }
  return r;
}

void RequireNonEmpty(std::span<const double> v, const char* name) {
  if (v.empty()) Fail(ErrorCode::kInvalidArgument, std::string(name) + " is empty");
}

}  // namespace

void ValidateVector(std::span<const double> v, const char* name) {
  RequireNonEmpty(v, name);
  for (double value : v) {
    if (!std::isfinite(value)) {
      Fail(ErrorCode::kInvalidArgument,
           std::string(name) + " contains a non-finite value");
    }
  }
}

double RelativeError(std::span<const double> got,
                     std::span<const double> expected) {
  Require(got.size() == expected.size(), "RelativeError: length mismatch");
  double scale = 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < got.size(); ++k) {
    scale = std::max(scale, std::abs(expected[k]));
    worst = std::max(worst, std::abs(got[k] - expected[k]));
  }
  return worst / std::max(scale, 1e-300);
}

RealVector ConvolveDirect(std::span<const double> a, std::span<const double> x) {
  RequireNonEmpty(a, "a");
  RequireNonEmpty(x, "x");
  RealVector out(a.size() + x.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) out[i + j] += a[i] * x[j];
  }
  return out;
}

RealVector ConvolveFft(std::span<const double> a, std::span<const double> x) {
  RequireNonEmpty(a, "a");
  RequireNonEmpty(x, "x");
  const std::size_t out_len = a.size() + x.size() - 1;
  const std::size_t n = NextFftSize(out_len);
  const std::size_t bins = n / 2 + 1;
  const int n_int = static_cast<int>(n);

  auto real = FftwAlloc<double>(n);
  auto spec_a = FftwAlloc<fftw_complex>(bins);
  auto spec_x = FftwAlloc<fftw_complex>(bins);

  std::unique_ptr<Plan> fwd_a, fwd_x, inv;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fwd_a = std::make_unique<Plan>(
        fftw_plan_dft_r2c_1d(n_int, real.get(), spec_a.get(), FFTW_ESTIMATE));
    fwd_x = std::make_unique<Plan>(
        fftw_plan_dft_r2c_1d(n_int, real.get(), spec_x.get(), FFTW_ESTIMATE));
    inv = std::make_unique<Plan>(
        fftw_plan_dft_c2r_1d(n_int, spec_a.get(), real.get(), FFTW_ESTIMATE));
  }

  std::fill(real.get(), real.get() + n, 0.0);
  std::copy(a.begin(), a.end(), real.get());
  fwd_a->Execute();
  std::fill(real.get(), real.get() + n, 0.0);
  std::copy(x.begin(), x.end(), real.get());
  fwd_x->Execute();

  for (std::size_t k = 0; k < bins; ++k) {
    const double re = spec_a[k][0] * spec_x[k][0] - spec_a[k][1] * spec_x[k][1];
    const double im = spec_a[k][0] * spec_x[k][1] + spec_a[k][1] * spec_x[k][0];
    spec_a[k][0] = re;
    spec_a[k][1] = im;
  }
  inv->Execute();

  RealVector out(out_len);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < out_len; ++k) out[k] = real[k] * scale;
  return out;
}

RealVector Partition::Join() const {
  RealVector out;
  out.reserve(pieces.size() * piece_length);
  for (const auto& piece : pieces) out.insert(out.end(), piece.begin(), piece.end());
  out.resize(original_length);
  return out;
}

Partition MakePartition(std::span<const double> v, std::size_t piece_length) {
  RequireNonEmpty(v, "v");
  if (piece_length < 1 || piece_length > v.size()) {
    Fail(ErrorCode::kInvalidArgument,
         "piece_length must lie in [1, " + std::to_string(v.size()) + "], got " +
             std::to_string(piece_length));
  }
  Partition p;
  p.piece_length = piece_length;
  p.original_length = v.size();
  const std::size_t count = (v.size() + piece_length - 1) / piece_length;
  p.pad_count = count * piece_length - v.size();
  p.pieces.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RealVector piece(piece_length, 0.0);
    const std::size_t begin = i * piece_length;
    const std::size_t end = std::min(begin + piece_length, v.size());
    std::copy(v.begin() + begin, v.begin() + end, piece.begin());
    p.pieces.push_back(std::move(piece));
  }
  return p;
}

EncodingMatrix::EncodingMatrix(std::vector<double> points, std::size_t cols)
    : points_(std::move(points)), cols_(cols) {
  if (cols_ < 1) Fail(ErrorCode::kInvalidArgument, "encoding matrix needs cols >= 1");
  if (points_.size() < cols_) {
    Fail(ErrorCode::kInvalidArgument,
         "encoding matrix needs rows >= cols (rows=" +
             std::to_string(points_.size()) + ", cols=" + std::to_string(cols_) +
             ")");
  }
  entries_.resize(points_.size() * cols_);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double power = 1.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      entries_[i * cols_ + j] = power;
      power *= points_[i];
    }
  }
}

double EncodingPoint(std::size_t row) {
  Require(row < kEncodingRowBudget, "encoding row exceeds the row budget");
  const double n = BitReverse20(static_cast<std::uint32_t>(row));
  return std::cos(std::numbers::pi * (2.0 * n + 1.0) /
                  (2.0 * static_cast<double>(kEncodingRowBudget)));
}

EncodingMatrix MakeEncodingMatrix(std::size_t rows, std::size_t cols) {
  if (rows < cols) {
    Fail(ErrorCode::kInvalidArgument,
         "encoding matrix needs rows >= cols (rows=" + std::to_string(rows) +
             ", cols=" + std::to_string(cols) + ")");
  }
  std::vector<double> points(rows);
  for (std::size_t i = 0; i < rows; ++i) points[i] = EncodingPoint(i);
  return EncodingMatrix(std::move(points), cols);
}

EncodingMatrix MakeEncodingMatrix(std::vector<double> points, std::size_t cols) {
  std::vector<double> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    Fail(ErrorCode::kInvalidArgument, "encoding points must be pairwise distinct");
  }
  return EncodingMatrix(std::move(points), cols);
}

RealVector EncodeBlocks(std::span<const RealVector> blocks,
                        const EncodingMatrix& v, std::size_t row) {
  if (blocks.size() != v.cols()) {
    Fail(ErrorCode::kInvalidArgument,
         "encoding needs " + std::to_string(v.cols()) + " blocks, got " +
             std::to_string(blocks.size()));
  }
  if (row >= v.rows()) {
    Fail(ErrorCode::kInvalidArgument,
         "row " + std::to_string(row) + " out of range for " +
             std::to_string(v.rows()) + "-row encoding matrix");
  }
  const std::size_t len = blocks.front().size();
  RealVector out(len, 0.0);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    Require(blocks[j].size() == len, "encoding blocks differ in length");
    const double w = v.at(row, j);
    for (std::size_t k = 0; k < len; ++k) out[k] += w * blocks[j][k];
  }
  return out;
}

CodedPiece MdsEncode(const Partition& p, const EncodingMatrix& v,
                     std::size_t row) {
  return CodedPiece{row, EncodeBlocks(p.pieces, v, row)};
}

std::vector<RealVector> MdsDecode(std::span<const CodedPiece> results,
                                  const EncodingMatrix& v) {
  const std::size_t m = v.cols();
  if (results.size() < m) {
    Fail(ErrorCode::kInsufficientResults,
         "decoding needs " + std::to_string(m) + " results, got " +
             std::to_string(results.size()));
  }
  const std::size_t len = results.front().data.size();
  std::vector<bool> seen(v.rows(), false);
  for (const auto& r : results) {
    Require(r.row < v.rows(), "result row " + std::to_string(r.row) +
                                  " out of range for the encoding matrix");
    Require(!seen[r.row], "duplicate result row " + std::to_string(r.row));
    seen[r.row] = true;
    Require(r.data.size() == len && len > 0, "result vectors differ in length");
  }

  Eigen::MatrixXd system(m, m);
  Eigen::MatrixXd rhs(m, len);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) system(i, j) = v.at(results[i].row, j);
    rhs.row(i) = Eigen::Map<const Eigen::RowVectorXd>(results[i].data.data(),
                                                      static_cast<Eigen::Index>(len));
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  const double rcond = lu.rcond();
  if (!(rcond >= kDecodeMinRcond)) {
    Fail(ErrorCode::kDecodeFailure,
         "decoding system is ill-conditioned (rcond=" + std::to_string(rcond) + ")");
  }
  const Eigen::MatrixXd solved = lu.solve(rhs);

  std::vector<RealVector> blocks(m, RealVector(len));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < len; ++k) {
      const double value = solved(static_cast<Eigen::Index>(j),
                                  static_cast<Eigen::Index>(k));
      if (!std::isfinite(value)) {
        Fail(ErrorCode::kDecodeFailure, "decoding produced a non-finite value");
      }
      blocks[j][k] = value;
    }
  }

  for (std::size_t i = m; i < results.size(); ++i) {
    const RealVector check = EncodeBlocks(blocks, v, results[i].row);
    if (RelativeError(check, results[i].data) > kDecodeCheckTolerance) {
      Fail(ErrorCode::kDecodeFailure,
           "held-out row " + std::to_string(results[i].row) +
               " disagrees with the decoded blocks");
    }
  }
  return blocks;
}

RealVector OverlapAdd(std::span<const RealVector> partials, std::size_t shift,
                      std::size_t total_length) {
  Require(!partials.empty(), "overlap-add needs at least one partial");
  Require(shift >= 1, "overlap-add shift must be >= 1");
  const std::size_t len = partials.front().size();
  for (const auto& p : partials) {
    Require(p.size() == len, "overlap-add partials differ in length");
  }
  const std::size_t needed = (partials.size() - 1) * shift + len;
  if (total_length < needed) {
    Fail(ErrorCode::kInvalidArgument,
         "overlap-add total_length " + std::to_string(total_length) +
             " is shorter than the " + std::to_string(needed) +
             " samples the partials cover");
  }
  RealVector out(total_length, 0.0);
  for (std::size_t j = 0; j < partials.size(); ++j) {
    const std::size_t offset = j * shift;
    for (std::size_t k = 0; k < len; ++k) out[offset + k] += partials[j][k];
  }
  return out;
}

}  // namespace dyncc
