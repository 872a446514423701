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

// Mobility, computing and communication models for simulated UAV nodes,
// plus straggler injection.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>

#include "dyncc/rng.hpp"

namespace dyncc {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend bool operator==(Vec2, Vec2) = default;
};

double Distance(Vec2 a, Vec2 b);

// Point-mass step: p + v * dt, dt >= 0.
Vec2 AdvancePosition(Vec2 p, Vec2 v, double dt);

// FFT work to convolve vectors of lengths n1 and n2: C (n1+n2) log2(n1+n2).
double ComputeLoad(std::size_t n1, std::size_t n2, double load_constant);

// Shifted exponential: alpha*load + Exp(rate = mu/load).
double SampleComputeTime(CounterRng& rng, double mu, double alpha, double load);

// P[T <= t] for the distribution sampled above.
double ShiftedExponentialCdf(double t, double mu, double alpha, double load);

enum class SignalModel { kSimplified, kFull };

struct CommParams {
  double bandwidth_hz = 1e6;
  double noise_w = 1e-12;
  double bytes_per_number = 8.0;
  SignalModel model = SignalModel::kSimplified;
  // Full log-distance model only.
  double tx_power_dbm = 20.0;
  double wavelength_m = 0.125;
  double gain_dbi = 0.0;
  double noise_sigma_db = 0.0;
};

void ValidateCommParams(const CommParams& params);

// Received power in dBm at distance d > 0. `gaussian_noise_db` is the w term
// of the full model; the simplified model 6 - 20 log10(d) ignores it.
double SignalPowerDbm(double distance_m, const CommParams& params,
                      double gaussian_noise_db = 0.0);

// Shannon rate B log2(1 + 10^((S - 30)/10) / N0) in bits/s.
double DataRate(double distance_m, const CommParams& params,
                double gaussian_noise_db = 0.0);

// Seconds to move `numbers` values of `bytes_per_number` bytes at `rate` bit/s.
double CommTime(double numbers, double bytes_per_number, double rate_bps);

namespace behavior {
struct Normal {};
struct Delayed {
  double factor = 15.0;
};
struct FailedAt {
  double time = 0.0;
};
struct LeavesAt {
  double time = 0.0;
};
struct JoinsAt {
  double time = 0.0;
};
}  // namespace behavior

using StragglerBehavior =
    std::variant<behavior::Normal, behavior::Delayed, behavior::FailedAt,
                 behavior::LeavesAt, behavior::JoinsAt>;

std::string Describe(const StragglerBehavior& b);

// Slow-down applied to every service stage (1 unless delayed).
double DelayFactor(const StragglerBehavior& b);

// Time after which the node never returns anything, if any.
std::optional<double> DepartureTime(const StragglerBehavior& b);

// Time before which the node is invisible to the master (0 unless joining).
double JoinTime(const StragglerBehavior& b);

// Duration of a service stage of nominal length `nominal_time` starting at
// `now`, or nullopt if the node is gone (or not yet present) at completion.
std::optional<double> ApplyStraggler(const StragglerBehavior& b,
                                     double nominal_time, double now);

}  // namespace dyncc
