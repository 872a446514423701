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
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "dyncc/conv_coding.hpp"
#include "dyncc/error.hpp"
#include "dyncc/rng.hpp"

using namespace dyncc;

namespace {

RealVector RandomVector(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, StreamPurpose::kTaskData, 99);
  RealVector v(n);
  for (auto& x : v) x = rng.Uniform(-1.0, 1.0);
  return v;
}

// Coefficients of the product polynomial, accumulated per output power in
// long double.
RealVector PolynomialProduct(const RealVector& a, const RealVector& x) {
  std::vector<long double> c(a.size() + x.size() - 1, 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      c[i + j] += static_cast<long double>(a[i]) * static_cast<long double>(x[j]);
    }
  }
  return RealVector(c.begin(), c.end());
}

// Determinant by Gaussian elimination with partial pivoting.
long double Determinant(std::vector<std::vector<long double>> m) {
  const std::size_t n = m.size();
  long double det = 1.0L;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(m[r][c]) > std::fabs(m[p][c])) p = r;
    }
    if (m[p][c] == 0.0L) return 0.0L;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

template <typename Fn>
void ForEachSubset(std::size_t n, std::size_t k, Fn fn) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void CheckCode(ErrorCode expected, auto&& fn) {
  try {
    fn();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == expected);
  }
}

}  // namespace

TEST_CASE("direct convolution: hand examples") {
  CHECK(ConvolveDirect(RealVector{1, 2}, RealVector{3, 4}) == RealVector{3, 10, 8});
  CHECK(ConvolveDirect(RealVector{5, 6}, RealVector{1, 0, 0}) == RealVector{5, 6, 0, 0});
}

TEST_CASE("direct convolution matches polynomial product") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto a = RandomVector(8, seed);
    const auto x = RandomVector(8, seed + 1000);
    CHECK(RelativeError(ConvolveDirect(a, x), PolynomialProduct(a, x)) < 1e-14);
  }
}

TEST_CASE("fft convolution") {
  const auto y = ConvolveFft(RealVector{1, 2}, RealVector{3, 4});
  REQUIRE(y.size() == 3);
  CHECK(std::abs(y[0] - 3) < 1e-12);
  CHECK(std::abs(y[1] - 10) < 1e-12);
  CHECK(std::abs(y[2] - 8) < 1e-12);
  const auto s = ConvolveFft(RealVector{1}, RealVector{7, 7, 7});
  for (double v : s) CHECK(std::abs(v - 7) < 1e-12);

  const auto a = RandomVector(1000, 3);
  const auto x = RandomVector(500, 4);
  CHECK(RelativeError(ConvolveFft(a, x), ConvolveDirect(a, x)) < 1e-9);
  for (std::size_t n : {1u, 2u, 17u, 255u, 4096u}) {
    const auto p = RandomVector(n, n);
    const auto q = RandomVector(4096 - n + 1, n + 7);
    CHECK(RelativeError(ConvolveFft(p, q), ConvolveDirect(p, q)) < 1e-9);
  }
}

TEST_CASE("vector validation") {
  CheckCode(ErrorCode::kInvalidArgument, [] { ConvolveDirect(RealVector{}, RealVector{1}); });
  CheckCode(ErrorCode::kInvalidArgument, [] { ConvolveFft(RealVector{1}, RealVector{}); });
  CheckCode(ErrorCode::kInvalidArgument,
            [] { ValidateVector(RealVector{1.0, std::nan("")}, "v"); });
  CheckCode(ErrorCode::kInvalidArgument,
            [] { ValidateVector(RealVector{INFINITY}, "v"); });
}

TEST_CASE("partition") {
  auto p = MakePartition(RealVector{1, 2, 3, 4}, 2);
  CHECK(p.pieces == std::vector<RealVector>{{1, 2}, {3, 4}});
  CHECK(p.pad_count == 0);
  p = MakePartition(RealVector{1, 2, 3}, 2);
  CHECK(p.pieces == std::vector<RealVector>{{1, 2}, {3, 0}});
  CHECK(p.pad_count == 1);
  CHECK(p.Join() == RealVector{1, 2, 3});
  const auto v = RandomVector(2048, 5);
  p = MakePartition(v, 256);
  CHECK(p.size() == 8);
  CHECK(p.Join() == v);
  CheckCode(ErrorCode::kInvalidArgument, [&] { MakePartition(v, 0); });
  CheckCode(ErrorCode::kInvalidArgument, [&] { MakePartition(v, 4096); });
}

TEST_CASE("encoding matrix with explicit points") {
  const auto v = MakeEncodingMatrix(std::vector<double>{1, 2, 3}, 2);
  CHECK(v.rows() == 3);
  CHECK(v.cols() == 2);
  const double expected[3][2] = {{1, 1}, {1, 2}, {1, 3}};
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 2; ++c) CHECK(v.at(r, c) == expected[r][c]);
  const auto one = MakeEncodingMatrix(1, 1);
  CHECK(one.at(0, 0) == 1.0);
  CheckCode(ErrorCode::kInvalidArgument,
            [] { MakeEncodingMatrix(std::vector<double>{1, 2, 1}, 2); });
  CheckCode(ErrorCode::kInvalidArgument, [] { MakeEncodingMatrix(2, 3); });
}

TEST_CASE("default points are distinct, bounded and nested") {
  std::vector<double> pts;
  for (std::size_t r = 0; r < 64; ++r) pts.push_back(EncodingPoint(r));
  for (double g : pts) {
    CHECK(g > -1.0);
    CHECK(g < 1.0);
  }
  auto sorted = pts;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());

  const auto small = MakeEncodingMatrix(5, 3);
  const auto large = MakeEncodingMatrix(9, 3);
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 3; ++c) CHECK(small.at(r, c) == large.at(r, c));
  for (std::size_t r = 0; r < 9; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      CHECK(large.at(r, c) == doctest::Approx(std::pow(large.point(r), c)).epsilon(1e-14));
}

TEST_CASE("every 8-row submatrix of a 12x8 encoding matrix is nonsingular") {
  const auto v = MakeEncodingMatrix(12, 8);
  std::size_t checked = 0;
  ForEachSubset(12, 8, [&](const std::vector<std::size_t>& rows) {
    std::vector<std::vector<long double>> m(8, std::vector<long double>(8));
    long double product = 1.0L;
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) m[i][j] = v.at(rows[i], j);
      for (std::size_t j = i + 1; j < 8; ++j)
        product *= static_cast<long double>(v.point(rows[j])) - v.point(rows[i]);
    }
    const long double det = Determinant(m);
    CHECK(det != 0.0L);
    CHECK(std::fabs(det - product) <= 1e-6L * std::fabs(product));
    ++checked;
  });
  CHECK(checked == 495);
}

TEST_CASE("encode: basis pieces reveal the rows") {
  Partition p = MakePartition(RealVector{1, 0, 0, 1}, 2);
  const auto v = MakeEncodingMatrix(std::vector<double>{1, 2, 3}, 2);
  CHECK(MdsEncode(p, v, 0).data == RealVector{1, 1});
  CHECK(MdsEncode(p, v, 1).data == RealVector{1, 2});
  CHECK(MdsEncode(p, v, 2).data == RealVector{1, 3});
  const auto two = MakeEncodingMatrix(std::vector<double>{2, 5}, 2);
  CHECK(MdsEncode(p, two, 0).data == RealVector{1, 2});
}

TEST_CASE("encode matches a naive matrix-vector product") {
  const auto data = RandomVector(64, 11);
  const auto p = MakePartition(data, 16);
  const auto v = MakeEncodingMatrix(7, 4);
  for (std::size_t r = 0; r < 7; ++r) {
    RealVector expected(16, 0.0);
    for (std::size_t k = 0; k < 16; ++k)
      for (std::size_t j = 0; j < 4; ++j) expected[k] += v.at(r, j) * data[j * 16 + k];
    const auto coded = MdsEncode(p, v, r);
    CHECK(coded.row == r);
    CHECK(RelativeError(coded.data, expected) < 1e-14);
  }
}

TEST_CASE("decode: hand-solved 2x2 system") {
  const auto v = MakeEncodingMatrix(std::vector<double>{1, 2, 3}, 2);
  const std::vector<CodedPiece> results = {{1, {1, 2}}, {2, {1, 3}}};
  const auto blocks = MdsDecode(results, v);
  REQUIRE(blocks.size() == 2);
  CHECK(RelativeError(blocks[0], RealVector{1, 0}) < 1e-12);
  CHECK(RelativeError(blocks[1], RealVector{0, 1}) < 1e-12);
}

TEST_CASE("decode: square system recovers the identity partition") {
  const std::size_t m = 5;
  RealVector flat(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) flat[i * m + i] = 1.0;
  const auto p = MakePartition(flat, m);
  const auto v = MakeEncodingMatrix(m, m);
  std::vector<CodedPiece> results;
  for (std::size_t r = 0; r < m; ++r) results.push_back(MdsEncode(p, v, r));
  const auto blocks = MdsDecode(results, v);
  for (std::size_t i = 0; i < m; ++i) CHECK(RelativeError(blocks[i], p.pieces[i]) < 1e-9);
}

TEST_CASE("decode: every 6-subset of 9 coded pieces") {
  const auto p = MakePartition(RandomVector(6 * 32, 21), 32);
  const auto v = MakeEncodingMatrix(9, 6);
  std::vector<CodedPiece> coded;
  for (std::size_t r = 0; r < 9; ++r) coded.push_back(MdsEncode(p, v, r));
  std::size_t subsets = 0;
  ForEachSubset(9, 6, [&](const std::vector<std::size_t>& rows) {
    std::vector<CodedPiece> pick;
    for (auto r : rows) pick.push_back(coded[r]);
    const auto blocks = MdsDecode(pick, v);
    for (std::size_t i = 0; i < 6; ++i) CHECK(RelativeError(blocks[i], p.pieces[i]) < 1e-6);
    ++subsets;
  });
  CHECK(subsets == 84);
}

TEST_CASE("decode errors") {
  const auto p = MakePartition(RandomVector(12, 2), 4);
  const auto v = MakeEncodingMatrix(5, 3);
  std::vector<CodedPiece> coded;
  for (std::size_t r = 0; r < 5; ++r) coded.push_back(MdsEncode(p, v, r));

  CheckCode(ErrorCode::kInsufficientResults, [&] {
    MdsDecode(std::vector<CodedPiece>{coded[0], coded[1]}, v);
  });
  CheckCode(ErrorCode::kInvalidArgument, [&] {
    MdsDecode(std::vector<CodedPiece>{coded[0], coded[1], coded[1]}, v);
  });
  // Extra results are checked against the decoded blocks.
  CHECK_NOTHROW(MdsDecode(coded, v));
  auto corrupt = coded;
  corrupt[4].data[0] += 1.0;
  CheckCode(ErrorCode::kDecodeFailure, [&] { MdsDecode(corrupt, v); });
}

TEST_CASE("overlap-add") {
  const std::vector<RealVector> one = {{3, 10, 8}};
  CHECK(OverlapAdd(one, 2, 3) == RealVector{3, 10, 8});
  const std::vector<RealVector> two = {{3, 10, 8}, {5, 16, 12}};
  CHECK(OverlapAdd(two, 2, 5) == RealVector{3, 10, 13, 16, 12});
  CHECK(ConvolveDirect(RealVector{1, 2}, RealVector{3, 4, 5, 6}) ==
        RealVector{3, 10, 13, 16, 12});
  CheckCode(ErrorCode::kInvalidArgument, [&] { OverlapAdd(two, 2, 4); });

  const auto a = RandomVector(64, 31);
  const auto x = RandomVector(64, 32);
  const auto p = MakePartition(x, 16);
  std::vector<RealVector> partials;
  for (const auto& piece : p.pieces) partials.push_back(ConvolveDirect(a, piece));
  CHECK(RelativeError(OverlapAdd(partials, 16, 127), ConvolveDirect(a, x)) < 1e-9);
}

TEST_CASE("encoding commutes with convolution") {
  const auto a = RandomVector(40, 41);
  const auto p = MakePartition(RandomVector(5 * 24, 42), 24);
  const auto v = MakeEncodingMatrix(8, 5);
  for (std::size_t r = 0; r < 8; ++r) {
    const auto lhs = ConvolveFft(a, MdsEncode(p, v, r).data);
    std::vector<RealVector> conv;
    for (const auto& piece : p.pieces) conv.push_back(ConvolveDirect(a, piece));
    const auto rhs = EncodeBlocks(conv, v, r);
    CHECK(RelativeError(lhs, rhs) < 1e-9);
  }
}
