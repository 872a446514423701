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
// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dyncc/config.hpp"
#include "dyncc/conv_coding.hpp"
#include "dyncc/experiments.hpp"
#include "dyncc/rng.hpp"
#include "dyncc/scenario.hpp"
#include "dyncc/sim_models.hpp"
#include "dyncc/strategies.hpp"

using namespace dyncc;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

int g_failures = 0;

void Report(int id, bool pass, const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
}

RealVector RandomVector(CounterRng& rng, std::size_t n) {
  RealVector v(n);
  for (auto& x : v) x = rng.Uniform(-1.0, 1.0);
  return v;
}

const StrategyRow& RowFor(const std::vector<StrategyRow>& rows, double ratio,
                          StrategyKind kind) {
  for (const auto& r : rows) {
    if (r.strategy == kind && std::abs(r.ratio - ratio) < 1e-12) return r;
  }
  throw std::runtime_error("missing row");
}

// 1: all strategies reproduce the direct convolution.
void EndToEndCorrectness() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t bad = 0, runs = 0;
  for (std::size_t workers : {4u, 8u}) {
    ScenarioConfig sc = PresetScenario(1);
    sc.n1 = 1024;
    sc.n2 = 1024;
    sc.workers = workers;
    sc.compute_payload = true;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto [a, x] = DrawTask(sc, seed);
      const auto expected = ConvolveDirect(a, x);
      for (auto kind : kAllStrategies) {
        const auto m = RunEpisode(sc, kind, seed);
        ++runs;
        if (!m.outcome.success || !m.outcome.result ||
            m.outcome.result->size() != expected.size()) {
          ++bad;
          continue;
        }
        const double err = RelativeError(*m.outcome.result, expected);
        worst = std::max(worst, err);
        if (!(err <= 1e-6)) ++bad;
      }
    }
  }
  const double t = Seconds(start);
  Report(1, bad == 0 && t < 60.0,
         fmt::format("{} episodes, {} mismatches, worst relative error {:.3g}, {:.2f} s",
                     runs, bad, worst, t));
}

bool DecodesSubset(const Partition& p, const EncodingMatrix& v,
                   const std::vector<CodedPiece>& coded, const std::vector<std::size_t>& rows,
                   double& worst) {
  std::vector<CodedPiece> chosen;
  for (auto r : rows) chosen.push_back(coded[r]);
  try {
    const auto blocks = MdsDecode(chosen, v);
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      const double err = RelativeError(blocks[j], p.pieces[j]);
      worst = std::max(worst, err);
      if (!(err <= 1e-6)) return false;
    }
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

// 2: every m-subset of r coded pieces decodes.
void MdsProperty() {
  const auto start = Clock::now();
  CounterRng rng(2024, StreamPurpose::kTaskData, 0);
  std::size_t subsets = 0, bad = 0;
  double worst = 0.0;
  constexpr std::size_t kPieceLength = 16;
  for (std::size_t r = 1; r <= 10; ++r) {
    for (std::size_t m = 1; m <= r; ++m) {
      const auto a = RandomVector(rng, m * kPieceLength);
      const auto p = MakePartition(a, kPieceLength);
      const auto v = MakeEncodingMatrix(r, m);
      std::vector<CodedPiece> coded;
      for (std::size_t row = 0; row < r; ++row) coded.push_back(MdsEncode(p, v, row));
      std::vector<bool> mask(r, false);
      std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(m), true);
      do {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < r; ++i) {
          if (mask[i]) rows.push_back(i);
        }
        ++subsets;
        if (!DecodesSubset(p, v, coded, rows, worst)) ++bad;
      } while (std::prev_permutation(mask.begin(), mask.end()));
    }
  }
  {
    const std::size_t r = 24, m = 16;
    const auto a = RandomVector(rng, m * kPieceLength);
    const auto p = MakePartition(a, kPieceLength);
    const auto v = MakeEncodingMatrix(r, m);
    std::vector<CodedPiece> coded;
    for (std::size_t row = 0; row < r; ++row) coded.push_back(MdsEncode(p, v, row));
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::size_t> rows(r);
      std::iota(rows.begin(), rows.end(), 0);
      for (std::size_t i = r - 1; i > 0; --i) std::swap(rows[i], rows[rng.Below(i + 1)]);
      rows.resize(m);
      ++subsets;
      if (!DecodesSubset(p, v, coded, rows, worst)) ++bad;
    }
  }
  const double t = Seconds(start);
  Report(2, bad == 0 && t < 30.0,
         fmt::format("{} subsets, {} failed, worst relative error {:.3g}, {:.2f} s", subsets,
                     bad, worst, t));
}

// 3: convolving a coded piece equals coding the per-piece convolutions.
void Commutation() {
  CounterRng rng(77, StreamPurpose::kTaskData, 1);
  double worst = 0.0;
  std::size_t checks = 0;
  for (int instance = 0; instance < 50; ++instance) {
    const std::size_t m = 1 + rng.Below(8);
    const std::size_t r = m + rng.Below(8);
    const std::size_t piece = 1 + rng.Below(64);
    // A single piece cannot be padded: the partition needs length >= piece.
    const std::size_t len = m == 1 ? piece : (m - 1) * piece + 1 + rng.Below(piece);
    const auto a = RandomVector(rng, len);
    const auto x = RandomVector(rng, 1 + rng.Below(128));
    const auto p = MakePartition(a, piece);
    const auto v = MakeEncodingMatrix(r, p.size());
    std::vector<RealVector> partials;
    for (const auto& block : p.pieces) partials.push_back(ConvolveDirect(block, x));
    for (std::size_t row = 0; row < r; ++row) {
      const auto lhs = ConvolveFft(MdsEncode(p, v, row).data, x);
      const auto rhs = EncodeBlocks(partials, v, row);
      worst = std::max(worst, RelativeError(lhs, rhs));
      ++checks;
    }
  }
  Report(3, worst <= 1e-9,
         fmt::format("50 instances, {} coded rows, worst relative error {:.3g}", checks, worst));
}

// 4: the b sweep has an interior minimum.
void SweepShape() {
  const auto start = Clock::now();
  const auto cfg = BuildConfig({{"scenario.preset", "1"}, {"scenario.scale", "8"}});
  const auto& sc = cfg.scenario;
  const auto values = DefaultBValues(sc);
  const auto result = SweepB(sc, values, 25);
  const auto& rows = result.rows;
  const auto best = std::min_element(rows.begin(), rows.end(), [](auto& l, auto& r) {
    return l.mean_time < r.mean_time;
  });
  const double lo = rows.front().mean_time, hi = rows.back().mean_time;
  const bool interior = best != rows.begin() && best != rows.end() - 1;
  const bool margin = best->mean_time <= 0.95 * lo && best->mean_time <= 0.95 * hi;
  const double t = Seconds(start);
  std::string curve;
  for (const auto& r : rows) curve += fmt::format(" b{}={}", r.b, FormatTime(r.mean_time));
  Report(4, interior && margin && t < 300.0,
         fmt::format("argmin b={} ({:.1f}% below b={}, {:.1f}% below b={}), {:.2f} s;{}",
                     best->b, 100.0 * (1.0 - best->mean_time / lo), rows.front().b,
                     100.0 * (1.0 - best->mean_time / hi), rows.back().b, t, curve));
}

ScenarioConfig Resolved(int preset) {
  const auto cfg = BuildConfig({{"scenario.preset", std::to_string(preset)},
                                {"scenario.scale", "8"},
                                {"experiment.name", "compare"}});
  return ResolveParameters(cfg.scenario, cfg.b_sweep_ratio);
}

// 5: strategy ordering at 50% delayed stragglers.
void Ordering() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;
  for (int preset = 1; preset <= 4; ++preset) {
    auto sc = Resolved(preset);
    sc.straggler.mode = StragglerMode::kDelayed;
    sc.straggler.delay_factor = 15.0;
    const auto rows = CompareStrategies(sc, 0.5);
    const double unc = RowFor(rows, 0.5, StrategyKind::kUncoded).mean_time;
    const double trad = RowFor(rows, 0.5, StrategyKind::kTraditional).mean_time;
    const double dyn = RowFor(rows, 0.5, StrategyKind::kDynamic).mean_time;
    const bool pass = dyn < trad && trad < unc && dyn <= 0.5 * unc;
    ok = ok && pass;
    detail += fmt::format(" S{}(b={},s={}): dynamic={} coded={} uncoded={}{};", preset, sc.b,
                          sc.s, FormatTime(dyn), FormatTime(trad), FormatTime(unc),
                          pass ? "" : " [violated]");
  }
  const double t = Seconds(start);
  Report(5, ok && t < 600.0, fmt::format("{:.2f} s;{}", t, detail));
}

// 6: stress-test curve shape on scenario 4.
void StressShape() {
  const auto start = Clock::now();
  auto sc = Resolved(4);
  const auto ratios = DefaultRatios(sc);
  const auto rows = StressTest(sc, ratios);
  const double first = ratios[1];
  const double unc0 = RowFor(rows, 0.0, StrategyKind::kUncoded).mean_time;
  const double unc1 = RowFor(rows, first, StrategyKind::kUncoded).mean_time;
  const double dyn0 = RowFor(rows, 0.0, StrategyKind::kDynamic).mean_time;
  const double dyn_half = RowFor(rows, 0.5, StrategyKind::kDynamic).mean_time;
  const double knee = ratios[ratios.size() - 2];  // 5/6 with P = 6
  const double dyn_knee = RowFor(rows, knee, StrategyKind::kDynamic).mean_time;
  const bool a = unc1 >= 5.0 * unc0;
  const bool b = dyn_half <= 1.5 * dyn0;
  const bool c = dyn_knee <= 3.0 * dyn0;
  const double t = Seconds(start);
  Report(6, a && b && c && t < 600.0,
         fmt::format("b={} s={}; uncoded ratio {:.4g}/0 = {:.2f}x (need >= 5); dynamic "
                     "0.5/0 = {:.2f}x (need <= 1.5); dynamic {:.4g}/0 = {:.2f}x (need <= 3); "
                     "{:.2f} s",
                     sc.b, sc.s, first, unc1 / unc0, dyn_half / dyn0, knee, dyn_knee / dyn0,
                     t));
}

// 7: success rates under uniformly drawn failure counts.
void Resilience() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;
  for (int preset = 1; preset <= 4; ++preset) {
    const auto sc = Resolved(preset);
    const auto result = SuccessRate(sc, 2000, FailureDistribution::kUniformCount, 0.5);
    const double p1 = static_cast<double>(sc.workers) + 1.0;
    const double bound = TraditionalFailureBound(sc.n1, sc.n2, sc.workers, sc.s);
    const double tolerated = std::clamp(std::floor(bound), -1.0, static_cast<double>(sc.workers));
    const double coded_expected = (tolerated + 1.0) / p1;
    const double uncoded_expected = 1.0 / p1;
    for (const auto& row : result.rows) {
      bool pass = true;
      std::string what;
      switch (row.strategy) {
        case StrategyKind::kDynamic:
          pass = row.successes_with_survivor == row.runs_with_survivor;
          what = fmt::format("dynamic {}/{} with a survivor", row.successes_with_survivor,
                             row.runs_with_survivor);
          break;
        case StrategyKind::kUncoded:
          pass = std::abs(row.success_rate - uncoded_expected) <= 0.02;
          what = fmt::format("uncoded {:.4f} vs {:.4f}", row.success_rate, uncoded_expected);
          break;
        case StrategyKind::kTraditional:
          pass = std::abs(row.success_rate - coded_expected) <= 0.02;
          what = fmt::format("coded {:.4f} vs {:.4f} (s={}, bound {:.3g})", row.success_rate,
                             coded_expected, sc.s, bound);
          break;
      }
      ok = ok && pass;
      detail += fmt::format(" S{} {}{};", preset, what, pass ? "" : " [off]");
    }
  }
  const double t = Seconds(start);
  Report(7, ok && t < 600.0, fmt::format("{:.2f} s;{}", t, detail));
}

std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string WithoutTimestamp(const std::string& manifest) {
  std::istringstream in(manifest);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("created_utc", 0) != 0) out += line + "\n";
  }
  return out;
}

// 8: identical configs give byte-identical outputs.
void Determinism() {
  const auto root = std::filesystem::temp_directory_path() / "dyncc_acceptance";
  std::filesystem::remove_all(root);
  bool ok = true;
  std::string detail;
  for (const char* kind : {"sweep-b", "compare", "stress", "success-rate"}) {
    const auto cfg = BuildConfig(
        {{"scenario.preset", "1"}, {"scenario.scale", "8"}, {"experiment.name", kind}});
    const auto first = RunExperiment(cfg, (root / "a").string());
    const auto second = RunExperiment(cfg, (root / "b").string());
    const bool same_csv = ReadAll(first.csv_path) == ReadAll(second.csv_path);
    const bool same_manifest = WithoutTimestamp(ReadAll(first.manifest_path)) ==
                               WithoutTimestamp(ReadAll(second.manifest_path));
    ok = ok && same_csv && same_manifest;
    detail += fmt::format(" {} csv {} manifest {};", kind, same_csv ? "identical" : "DIFFERS",
                          same_manifest ? "identical" : "DIFFERS");
  }
  std::filesystem::remove_all(root);
  Report(8, ok, detail);
}

// 9: shifted-exponential sampler statistics.
void SamplerStatistics() {
  const double mu = 4e6, alpha = 1.0 / mu;
  const double load = ComputeLoad(512, 256, 1.0);
  const double floor = alpha * load;
  const double expected = floor + load / mu;
  CounterRng rng(9, StreamPurpose::kComputeTime, 0);
  double sum = 0.0, lowest = INFINITY;
  constexpr int kSamples = 100000;
  for (int i = 0; i < kSamples; ++i) {
    const double t = SampleComputeTime(rng, mu, alpha, load);
    sum += t;
    lowest = std::min(lowest, t);
  }
  const double mean = sum / kSamples;
  const double rel = std::abs(mean - expected) / expected;
  Report(9, rel <= 0.02 && lowest >= floor,
         fmt::format("mean {:.6g} vs {:.6g} ({:.3f}% off), min {:.6g} >= {:.6g}", mean,
                     expected, 100.0 * rel, lowest, floor));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> checks = {
      EndToEndCorrectness, MdsProperty, Commutation, SweepShape, Ordering,
      StressShape,         Resilience,  Determinism, SamplerStatistics};
  for (std::size_t i = 0; i < checks.size(); ++i) {
    try {
      checks[i]();
    } catch (const std::exception& e) {
      Report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", g_failures, checks.size());
  return g_failures == 0 ? 0 : 1;
}
