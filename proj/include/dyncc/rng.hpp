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
#include <cstdint>

namespace dyncc {

// What a stream is used for. Values are part of the stream key, so they must
// never be renumbered.
enum class StreamPurpose : std::uint64_t {
  kWorkerParams = 1,
  kInitialPosition = 2,
  kVelocity = 3,
  kComputeTime = 4,
  kStragglerSelection = 5,
  kFailureCount = 6,
  kTaskData = 7,
  kSignalNoise = 8,
};

// Counter-based generator. Output n of a stream is
//
//   splitmix64_finalize(key + (n + 1) * 0x9E3779B97F4A7C15)
//
// where splitmix64_finalize is the SplitMix64 output mix (xor-shift 30,
// multiply 0xBF58476D1CE4E5B9, xor-shift 27, multiply 0x94D049BB133111EB,
// xor-shift 31) and key = mix(mix(mix(seed) ^ purpose) ^ (entity + 1)).
// Streams for distinct (seed, purpose, entity) triples are independent, so
// adding a straggler or a worker never perturbs the draws of other workers.
//
// Real-valued draws use only integer arithmetic plus std::log, which keeps
// them reproducible across standard libraries (unlike <random>'s
// distributions, whose algorithms are implementation-defined).
class CounterRng {
 public:
  CounterRng() = default;
  CounterRng(std::uint64_t seed, StreamPurpose purpose, std::uint64_t entity)
      : key_(Mix(Mix(Mix(seed) ^ static_cast<std::uint64_t>(purpose)) ^
                 (entity + 1))) {}

  static constexpr std::uint64_t Mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t NextU64() {
    ++counter_;
    return Mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer on [0, n), n >= 1, rejection-sampled to avoid bias.
  std::uint64_t Below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t r;
    do {
      r = NextU64();
    } while (r >= limit);
    return r % n;
  }

  // Exponential with the given rate, by inversion.
  double Exponential(double rate) { return -std::log1p(-Uniform()) / rate; }

  // Standard normal by Box-Muller (one value per call).
  double Normal() {
    const double u1 = 1.0 - Uniform();
    const double u2 = Uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace dyncc
