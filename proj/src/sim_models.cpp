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
#include "dyncc/sim_models.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "dyncc/error.hpp"

namespace dyncc {

double Distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Vec2 AdvancePosition(Vec2 p, Vec2 v, double dt) {
  Require(dt >= 0.0, "AdvancePosition: dt must be >= 0");
  return p + v * dt;
}

double ComputeLoad(std::size_t n1, std::size_t n2, double load_constant) {
  Require(n1 >= 1 && n2 >= 1, "ComputeLoad: lengths must be >= 1");
  Require(load_constant > 0.0, "ComputeLoad: C must be > 0");
  const double n = static_cast<double>(n1 + n2);
  return load_constant * n * std::log2(n);
}

double SampleComputeTime(CounterRng& rng, double mu, double alpha, double load) {
  Require(mu > 0.0 && alpha > 0.0 && load > 0.0,
          "SampleComputeTime: mu, alpha and load must be > 0");
  return alpha * load + rng.Exponential(mu / load);
}

double ShiftedExponentialCdf(double t, double mu, double alpha, double load) {
  const double shift = alpha * load;
  if (t < shift) return 0.0;
  // The printed CDF has a positive exponent; this is the valid form.
  return 1.0 - std::exp(-(mu / load) * (t - shift));
}

void ValidateCommParams(const CommParams& params) {
  if (!(params.bandwidth_hz > 0.0)) Fail(ErrorCode::kValidation, "bandwidth must be > 0");
  if (!(params.noise_w > 0.0)) Fail(ErrorCode::kValidation, "noise power must be > 0");
  if (!(params.bytes_per_number > 0.0)) {
    Fail(ErrorCode::kValidation, "bytes per number must be > 0");
  }
  if (params.model == SignalModel::kFull && !(params.wavelength_m > 0.0)) {
    Fail(ErrorCode::kValidation, "wavelength must be > 0");
  }
  if (!(params.noise_sigma_db >= 0.0)) {
    Fail(ErrorCode::kValidation, "noise sigma must be >= 0");
  }
}

double SignalPowerDbm(double distance_m, const CommParams& params,
                      double gaussian_noise_db) {
  Require(distance_m > 0.0, "SignalPowerDbm: distance must be > 0");
  if (params.model == SignalModel::kSimplified) {
    return 6.0 - 20.0 * std::log10(distance_m);
  }
  return params.tx_power_dbm + 20.0 * std::log10(params.wavelength_m) -
         20.0 * std::log10(4.0 * std::numbers::pi) - 20.0 * std::log10(distance_m) +
         params.gain_dbi + gaussian_noise_db;
}

double DataRate(double distance_m, const CommParams& params,
                double gaussian_noise_db) {
  const double dbm = SignalPowerDbm(distance_m, params, gaussian_noise_db);
  const double watts = std::pow(10.0, (dbm - 30.0) / 10.0);
  return params.bandwidth_hz * std::log2(1.0 + watts / params.noise_w);
}

double CommTime(double numbers, double bytes_per_number, double rate_bps) {
  Require(numbers >= 0.0, "CommTime: payload must be >= 0");
  Require(bytes_per_number > 0.0, "CommTime: bytes per number must be > 0");
  Require(rate_bps > 0.0, "CommTime: rate must be > 0");
  return numbers * bytes_per_number * 8.0 / rate_bps;
}

std::string Describe(const StragglerBehavior& b) {
  struct {
    std::string operator()(const behavior::Normal&) const { return "normal"; }
    std::string operator()(const behavior::Delayed& d) const {
      return fmt::format("delayed({:g})", d.factor);
    }
    std::string operator()(const behavior::FailedAt& f) const {
      return fmt::format("failed_at({:g})", f.time);
    }
    std::string operator()(const behavior::LeavesAt& l) const {
      return fmt::format("leaves_at({:g})", l.time);
    }
    std::string operator()(const behavior::JoinsAt& j) const {
      return fmt::format("joins_at({:g})", j.time);
    }
  } visitor;
  return std::visit(visitor, b);
}

double DelayFactor(const StragglerBehavior& b) {
  if (const auto* d = std::get_if<behavior::Delayed>(&b)) return d->factor;
  return 1.0;
}

std::optional<double> DepartureTime(const StragglerBehavior& b) {
  if (const auto* f = std::get_if<behavior::FailedAt>(&b)) return f->time;
  if (const auto* l = std::get_if<behavior::LeavesAt>(&b)) return l->time;
  return std::nullopt;
}

double JoinTime(const StragglerBehavior& b) {
  if (const auto* j = std::get_if<behavior::JoinsAt>(&b)) return j->time;
  return 0.0;
}

std::optional<double> ApplyStraggler(const StragglerBehavior& b,
                                     double nominal_time, double now) {
  Require(nominal_time >= 0.0, "ApplyStraggler: nominal time must be >= 0");
  if (now < JoinTime(b)) return std::nullopt;
  const double duration = DelayFactor(b) * nominal_time;
  if (const auto departure = DepartureTime(b); departure && now + duration > *departure) {
    return std::nullopt;
  }
  return duration;
}

}  // namespace dyncc
