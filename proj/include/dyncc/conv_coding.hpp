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

// Convolution, block partitioning, overlap-add reconstruction and real-valued
// Vandermonde (MDS) encoding/decoding of sub-vectors.
//
// Everything here is a pure function over its arguments and may be called
// from any thread.

#include <cstddef>
#include <span>
#include <vector>

namespace dyncc {

using RealVector = std::vector<double>;

// Throws kInvalidArgument if `v` is empty or holds a non-finite value.
void ValidateVector(std::span<const double> v, const char* name);

// max_k |got[k] - expected[k]| / max(max_k |expected[k]|, tiny). Lengths must
// match. This is the norm-wise relative error used by every tolerance check.
double RelativeError(std::span<const double> got,
                     std::span<const double> expected);

// Brute-force linear convolution; the reference for every other path.
RealVector ConvolveDirect(std::span<const double> a, std::span<const double> x);

// Linear convolution through a real-to-complex FFT of size >= |a|+|x|-1.
RealVector ConvolveFft(std::span<const double> a, std::span<const double> x);

struct Partition {
  std::vector<RealVector> pieces;
  std::size_t piece_length = 0;
  std::size_t original_length = 0;
  std::size_t pad_count = 0;

  std::size_t size() const { return pieces.size(); }
  // Concatenation of the pieces with the padding dropped.
  RealVector Join() const;
};

// Splits `v` into ceil(|v| / piece_length) pieces, zero-padding the last.
Partition MakePartition(std::span<const double> v, std::size_t piece_length);

// Row i is [1, g_i, g_i^2, ..., g_i^(cols-1)].
class EncodingMatrix {
 public:
  EncodingMatrix(std::vector<double> points, std::size_t cols);

  std::size_t rows() const { return points_.size(); }
  std::size_t cols() const { return cols_; }
  double point(std::size_t row) const { return points_[row]; }
  const std::vector<double>& points() const { return points_; }
  double at(std::size_t row, std::size_t col) const {
    return entries_[row * cols_ + col];
  }
  std::span<const double> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }

 private:
  std::vector<double> points_;
  std::size_t cols_;
  std::vector<double> entries_;
};

// Size of the fixed Chebyshev point set that rows are drawn from.
inline constexpr std::size_t kEncodingRowBudget = std::size_t{1} << 20;

// Evaluation point of row `row` in the default scheme:
//   g = cos(pi * (2n + 1) / (2 * kEncodingRowBudget)),  n = bitreverse20(row).
// The bit-reversed walk makes every prefix of rows spread over (-1, 1), so a
// matrix with more rows extends one with fewer rows without changing them.
double EncodingPoint(std::size_t row);

// Vandermonde matrix on the default point scheme. rows >= cols >= 1.
EncodingMatrix MakeEncodingMatrix(std::size_t rows, std::size_t cols);

// Vandermonde matrix on caller-supplied points, which must be pairwise
// distinct and at least `cols` in number.
EncodingMatrix MakeEncodingMatrix(std::vector<double> points, std::size_t cols);

struct CodedPiece {
  std::size_t row = 0;
  RealVector data;
};

// data = sum_j V[row][j] * pieces[j].
CodedPiece MdsEncode(const Partition& p, const EncodingMatrix& v,
                     std::size_t row);

// Same combination over arbitrary equal-length blocks; used to encode
// per-block results when checking decodes.
RealVector EncodeBlocks(std::span<const RealVector> blocks,
                        const EncodingMatrix& v, std::size_t row);

// Recovers the V.cols() uncoded blocks from coded results.
//
// The first V.cols() entries of `results` form the square system, solved by
// LU with partial pivoting. Any further entries are treated as held-out rows:
// each is re-encoded from the recovered blocks and must agree within 1e-4
// relative. A reciprocal condition estimate below kDecodeMinRcond is also
// reported as kDecodeFailure, since the forward error could exceed 1e-4.
//
// Errors: fewer than V.cols() results -> kInsufficientResults; duplicate or
// out-of-range rows, unequal lengths -> kInvalidArgument.
std::vector<RealVector> MdsDecode(std::span<const CodedPiece> results,
                                  const EncodingMatrix& v);

inline constexpr double kDecodeCheckTolerance = 1e-4;
inline constexpr double kDecodeMinRcond = 2.3e-12;

// out = sum_j shift_right(partials[j], j * shift), of length total_length.
// Requires total_length >= (count - 1) * shift + partial length.
RealVector OverlapAdd(std::span<const RealVector> partials, std::size_t shift,
                      std::size_t total_length);

}  // namespace dyncc
