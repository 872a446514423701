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
// Command-line front end. Links only the C interface.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "dyncc/dyncc.h"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

int ExitCodeFor(dyncc_status status) {
  switch (status) {
    case DYNCC_OK: return 0;
    case DYNCC_INVALID_ARGUMENT:
    case DYNCC_VALIDATION_ERROR: return kExitValidation;
    default: return kExitRuntime;
  }
}

int Report(dyncc_status status) {
  if (status != DYNCC_OK) {
    std::fprintf(stderr, "error (%s): %s\n", dyncc_status_name(status), dyncc_last_error());
  }
  return ExitCodeFor(status);
}

struct ConfigHandle {
  dyncc_config* ptr = nullptr;
  ~ConfigHandle() { dyncc_config_destroy(ptr); }
};

struct EpisodeHandle {
  dyncc_episode* ptr = nullptr;
  ~EpisodeHandle() { dyncc_episode_destroy(ptr); }
};

std::string JoinList(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

struct Options {
  int scenario = 1;
  double scale = 8.0;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> b;
  std::optional<std::size_t> s;
  std::optional<double> ratio;
  std::optional<std::string> mode;
  std::vector<std::string> b_values;
  std::vector<std::string> ratios;
  std::optional<unsigned> threads;
  std::string out_dir = "results";
  std::string config_path;
  std::string strategy = "dynamic";
  std::string events_path;
  bool payload = false;
};

// Applies command-line overrides on top of the config, in a fixed order.
dyncc_status ApplyOverrides(dyncc_config* cfg, const Options& o) {
  std::vector<std::pair<std::string, std::string>> sets;
  if (o.seed) sets.emplace_back("scenario.seed_base", std::to_string(*o.seed));
  if (o.reps) sets.emplace_back("scenario.repetitions", std::to_string(*o.reps));
  if (o.runs) sets.emplace_back("experiment.runs", std::to_string(*o.runs));
  if (o.b) sets.emplace_back("scenario.b", std::to_string(*o.b));
  if (o.s) sets.emplace_back("scenario.s", std::to_string(*o.s));
  if (o.ratio) {
    sets.emplace_back("experiment.ratio", std::to_string(*o.ratio));
    sets.emplace_back("straggler.ratio", std::to_string(*o.ratio));
  }
  if (o.mode) sets.emplace_back("straggler.mode", *o.mode);
  if (!o.b_values.empty()) sets.emplace_back("experiment.b_values", JoinList(o.b_values));
  if (!o.ratios.empty()) sets.emplace_back("experiment.ratios", JoinList(o.ratios));
  if (o.threads) sets.emplace_back("experiment.threads", std::to_string(*o.threads));
  if (o.payload) sets.emplace_back("scenario.compute_payload", "true");
  for (const auto& [key, value] : sets) {
    if (auto st = dyncc_config_set(cfg, key.c_str(), value.c_str()); st != DYNCC_OK) return st;
  }
  return DYNCC_OK;
}

int RunExperiment(dyncc_config* cfg, const Options& o) {
  if (auto st = ApplyOverrides(cfg, o); st != DYNCC_OK) return Report(st);
  char summary[1024] = {};
  const auto st = dyncc_run_experiment(cfg, o.out_dir.c_str(), summary, sizeof summary);
  if (st == DYNCC_OK) std::printf("%s\nwrote results to %s\n", summary, o.out_dir.c_str());
  return Report(st);
}

int RunPreset(const std::string& experiment, const Options& o) {
  ConfigHandle cfg;
  if (auto st = dyncc_config_create_preset(o.scenario, o.scale, &cfg.ptr); st != DYNCC_OK) {
    return Report(st);
  }
  if (auto st = dyncc_config_set(cfg.ptr, "experiment.name", experiment.c_str());
      st != DYNCC_OK) {
    return Report(st);
  }
  return RunExperiment(cfg.ptr, o);
}

int RunFromFile(const Options& o) {
  ConfigHandle cfg;
  if (auto st = dyncc_config_load(o.config_path.c_str(), &cfg.ptr); st != DYNCC_OK) {
    return Report(st);
  }
  return RunExperiment(cfg.ptr, o);
}

int RunSingleEpisode(const Options& o) {
  ConfigHandle cfg;
  if (auto st = dyncc_config_create_preset(o.scenario, o.scale, &cfg.ptr); st != DYNCC_OK) {
    return Report(st);
  }
  if (auto st = ApplyOverrides(cfg.ptr, o); st != DYNCC_OK) return Report(st);
  EpisodeHandle ep;
  const std::uint64_t seed = o.seed.value_or(1);
  if (auto st = dyncc_episode_run(cfg.ptr, o.strategy.c_str(), seed,
                                  o.events_path.empty() ? 0 : 1, &ep.ptr);
      st != DYNCC_OK) {
    return Report(st);
  }
  int success = 0;
  double time = 0.0, horizon = 0.0;
  std::size_t b = 0, s = 0, dispatched = 0, redundancy = 0;
  dyncc_episode_success(ep.ptr, &success);
  dyncc_episode_completion_time(ep.ptr, &time);
  dyncc_episode_horizon(ep.ptr, &horizon);
  dyncc_episode_piece_length(ep.ptr, &b, &s);
  dyncc_episode_pieces_dispatched(ep.ptr, &dispatched);
  dyncc_episode_redundancy_used(ep.ptr, &redundancy);
  std::printf(
      "strategy=%s seed=%llu success=%d completion_time_s=%.6g horizon_s=%.6g b=%zu s=%zu "
      "pieces=%zu redundancy=%zu\n",
      o.strategy.c_str(), static_cast<unsigned long long>(seed), success, time, horizon, b, s,
      dispatched, redundancy);
  if (!o.events_path.empty()) {
    if (auto st = dyncc_episode_write_events(ep.ptr, o.events_path.c_str()); st != DYNCC_OK) {
      return Report(st);
    }
    std::printf("wrote events to %s\n", o.events_path.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coded distributed convolution over simulated mobile workers"};
  app.set_version_flag("--version", std::string(dyncc_version()));
  app.require_subcommand(1);

  Options o;
  auto scenario_opts = [&o](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Preset scenario 1-4")->check(CLI::Range(1, 4));
    sub->add_option("--scale", o.scale, "Divide N1 and N2 by this factor (1 = full size)")
        ->check(CLI::PositiveNumber);
  };
  auto common_opts = [&o](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Base seed; episode r uses seed + r");
    sub->add_option("--reps", o.reps, "Episodes per table cell")->check(CLI::PositiveNumber);
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    sub->add_option("--out", o.out_dir, "Output directory");
    sub->add_option("--b", o.b, "Dynamic piece length (default: sweep argmin)");
    sub->add_option("--s", o.s, "Traditional block length (default: selection rule)");
  };

  auto* sweep = app.add_subcommand("sweep-b", "Completion time of the dynamic scheme versus b");
  scenario_opts(sweep);
  common_opts(sweep);
  sweep->add_option("--b-values", o.b_values, "Comma-separated b grid")->delimiter(',');

  auto* compare = app.add_subcommand("compare", "Three strategies at one straggler ratio");
  scenario_opts(compare);
  common_opts(compare);
  compare->add_option("--ratio", o.ratio, "Straggler ratio in [0, 1]");
  compare->add_option("--mode", o.mode, "Straggler mode: delayed, fail, leave");

  auto* stress = app.add_subcommand("stress", "Three strategies across straggler ratios");
  scenario_opts(stress);
  common_opts(stress);
  stress->add_option("--ratios", o.ratios, "Comma-separated ratios")->delimiter(',');
  stress->add_option("--mode", o.mode, "Straggler mode: delayed, fail, leave");

  auto* success = app.add_subcommand("success-rate", "Completion rate under node failures");
  scenario_opts(success);
  common_opts(success);
  success->add_option("--runs", o.runs, "Number of runs")->check(CLI::PositiveNumber);

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", o.config_path, "INI config or manifest")->required();
  common_opts(run);
  run->add_option("--runs", o.runs, "Number of runs (success-rate)");

  auto* episode = app.add_subcommand("episode", "Run one episode and print its metrics");
  scenario_opts(episode);
  episode->add_option("--seed", o.seed, "Episode seed");
  episode->add_option("--strategy", o.strategy, "uncoded, coded or dynamic");
  episode->add_option("--ratio", o.ratio, "Straggler ratio in [0, 1]");
  episode->add_option("--mode", o.mode, "Straggler mode: delayed, fail, leave");
  episode->add_option("--b", o.b, "Dynamic piece length");
  episode->add_option("--s", o.s, "Traditional block length");
  episode->add_option("--events", o.events_path, "Write the event log CSV here");
  episode->add_flag("--payload", o.payload, "Compute and decode real convolutions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  if (*sweep) return RunPreset("sweep-b", o);
  if (*compare) return RunPreset("compare", o);
  if (*stress) return RunPreset("stress", o);
  if (*success) return RunPreset("success-rate", o);
  if (*run) return RunFromFile(o);
  if (*episode) return RunSingleEpisode(o);
  return kExitValidation;
}
