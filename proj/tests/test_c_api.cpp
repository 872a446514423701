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
// Exercises the shared library through its C header only.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dyncc/dyncc.h"

namespace {

struct Config {
  dyncc_config* ptr = nullptr;
  ~Config() { dyncc_config_destroy(ptr); }
};

struct Episode {
  dyncc_episode* ptr = nullptr;
  ~Episode() { dyncc_episode_destroy(ptr); }
};

std::string Format(const dyncc_config* cfg) {
  std::size_t needed = 0;
  REQUIRE(dyncc_config_format(cfg, nullptr, 0, &needed) == DYNCC_OK);
  std::string text(needed, '\0');
  REQUIRE(dyncc_config_format(cfg, text.data(), text.size(), nullptr) == DYNCC_OK);
  text.resize(needed - 1);
  return text;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(dyncc_status_name(DYNCC_OK)) == "ok");
  CHECK(std::string(dyncc_status_name(DYNCC_VALIDATION_ERROR)) == "validation error");
  CHECK(std::string(dyncc_version()).size() > 0);
  CHECK(dyncc_last_error() != nullptr);
}

TEST_CASE("config create, set and format") {
  Config cfg;
  REQUIRE(dyncc_config_create_preset(2, 8.0, &cfg.ptr) == DYNCC_OK);
  auto text = Format(cfg.ptr);
  CHECK(text.find("n1 = 512") != std::string::npos);
  CHECK(text.find("workers = 4") != std::string::npos);

  CHECK(dyncc_config_set(cfg.ptr, "scenario.workers", "6") == DYNCC_OK);
  CHECK(Format(cfg.ptr).find("workers = 6") != std::string::npos);

  CHECK(dyncc_config_set(cfg.ptr, "straggler.ratio", "1.5") == DYNCC_VALIDATION_ERROR);
  CHECK(std::string(dyncc_last_error()).find("ratio") != std::string::npos);
  CHECK(dyncc_config_set(cfg.ptr, "scenario.bogus", "1") == DYNCC_VALIDATION_ERROR);
  // Failed sets leave the config as it was.
  CHECK(Format(cfg.ptr).find("ratio = 0.5") != std::string::npos);
  CHECK(Format(cfg.ptr).find("workers = 6") != std::string::npos);

  char small[8];
  std::size_t needed = 0;
  REQUIRE(dyncc_config_format(cfg.ptr, small, sizeof small, &needed) == DYNCC_OK);
  CHECK(needed > sizeof small);
  CHECK(std::string(small).size() == sizeof small - 1);
}

TEST_CASE("invalid arguments") {
  Config cfg;
  CHECK(dyncc_config_create_preset(7, 1.0, &cfg.ptr) == DYNCC_VALIDATION_ERROR);
  CHECK(cfg.ptr == nullptr);
  CHECK(dyncc_config_create_preset(1, 1.0, nullptr) == DYNCC_INVALID_ARGUMENT);
  CHECK(dyncc_config_load("/nonexistent/x.ini", &cfg.ptr) == DYNCC_VALIDATION_ERROR);
  CHECK(dyncc_config_set(nullptr, "a.b", "c") == DYNCC_INVALID_ARGUMENT);
  double out = 0;
  CHECK(dyncc_episode_completion_time(nullptr, &out) == DYNCC_INVALID_ARGUMENT);

  REQUIRE(dyncc_config_create_preset(1, 8.0, &cfg.ptr) == DYNCC_OK);
  Episode ep;
  CHECK(dyncc_episode_run(cfg.ptr, "fastest", 1, 0, &ep.ptr) == DYNCC_INVALID_ARGUMENT);
  CHECK(ep.ptr == nullptr);
}

TEST_CASE("config load from file") {
  const auto path = std::filesystem::temp_directory_path() / "dyncc_c_api.ini";
  std::ofstream(path) << "[scenario]\npreset = 3\nscale = 8\n[experiment]\nname = compare\n";
  Config cfg;
  REQUIRE(dyncc_config_load(path.string().c_str(), &cfg.ptr) == DYNCC_OK);
  CHECK(Format(cfg.ptr).find("name = compare") != std::string::npos);
}

TEST_CASE("episode getters and payload") {
  Config cfg;
  REQUIRE(dyncc_config_create_preset(1, 64.0, &cfg.ptr) == DYNCC_OK);
  REQUIRE(dyncc_config_set(cfg.ptr, "scenario.compute_payload", "true") == DYNCC_OK);
  REQUIRE(dyncc_config_set(cfg.ptr, "scenario.b", "8") == DYNCC_OK);

  for (const char* strategy : {"uncoded", "coded", "dynamic"}) {
    CAPTURE(strategy);
    Episode ep;
    REQUIRE(dyncc_episode_run(cfg.ptr, strategy, 3, 1, &ep.ptr) == DYNCC_OK);
    int success = 0;
    double time = 0, horizon = 0;
    std::size_t b = 0, s = 0, pieces = 0, redundancy = 0, events = 0, length = 0;
    CHECK(dyncc_episode_success(ep.ptr, &success) == DYNCC_OK);
    CHECK(dyncc_episode_completion_time(ep.ptr, &time) == DYNCC_OK);
    CHECK(dyncc_episode_horizon(ep.ptr, &horizon) == DYNCC_OK);
    CHECK(dyncc_episode_piece_length(ep.ptr, &b, &s) == DYNCC_OK);
    CHECK(dyncc_episode_pieces_dispatched(ep.ptr, &pieces) == DYNCC_OK);
    CHECK(dyncc_episode_redundancy_used(ep.ptr, &redundancy) == DYNCC_OK);
    CHECK(dyncc_episode_event_count(ep.ptr, &events) == DYNCC_OK);
    CHECK(success == 1);
    CHECK(time > 0.0);
    CHECK(time < horizon);
    CHECK(pieces > 0);
    CHECK(events > 0);

    REQUIRE(dyncc_episode_result(ep.ptr, nullptr, 0, &length) == DYNCC_OK);
    CHECK(length == 4096 / 64 + 2048 / 64 - 1);
    std::vector<double> y(length);
    CHECK(dyncc_episode_result(ep.ptr, y.data(), y.size(), nullptr) == DYNCC_OK);
    double norm = 0;
    for (double v : y) norm += v * v;
    CHECK(norm > 0.0);

    const auto log = std::filesystem::temp_directory_path() / "dyncc_c_api_events.csv";
    CHECK(dyncc_episode_write_events(ep.ptr, log.string().c_str()) == DYNCC_OK);
    std::ifstream in(log);
    std::string header;
    std::getline(in, header);
    CHECK(header.find("time") != std::string::npos);
  }

  Episode quiet;
  REQUIRE(dyncc_episode_run(cfg.ptr, "dynamic", 3, 0, &quiet.ptr) == DYNCC_OK);
  CHECK(dyncc_episode_write_events(quiet.ptr, "/tmp/never.csv") == DYNCC_NOT_READY);
}

TEST_CASE("episodes are deterministic in the seed") {
  Config cfg;
  REQUIRE(dyncc_config_create_preset(4, 16.0, &cfg.ptr) == DYNCC_OK);
  double t1 = 0, t2 = 0;
  Episode a, b;
  REQUIRE(dyncc_episode_run(cfg.ptr, "dynamic", 42, 0, &a.ptr) == DYNCC_OK);
  REQUIRE(dyncc_episode_run(cfg.ptr, "dynamic", 42, 0, &b.ptr) == DYNCC_OK);
  dyncc_episode_completion_time(a.ptr, &t1);
  dyncc_episode_completion_time(b.ptr, &t2);
  CHECK(t1 == t2);
}

TEST_CASE("convolve") {
  const double a[] = {1, 2, 3};
  const double x[] = {4, 5};
  double out[4] = {};
  REQUIRE(dyncc_convolve(a, 3, x, 2, "direct", out, 4) == DYNCC_OK);
  CHECK(out[0] == 4);
  CHECK(out[1] == 13);
  CHECK(out[2] == 22);
  CHECK(out[3] == 15);
  double fft[4] = {};
  REQUIRE(dyncc_convolve(a, 3, x, 2, "fft", fft, 4) == DYNCC_OK);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(fft[i] - out[i]) < 1e-12);
  CHECK(dyncc_convolve(a, 3, x, 2, "fft", out, 3) == DYNCC_INVALID_ARGUMENT);
  CHECK(dyncc_convolve(a, 3, x, 2, "winograd", out, 4) == DYNCC_INVALID_ARGUMENT);
  CHECK(dyncc_convolve(a, 0, x, 2, "fft", out, 4) == DYNCC_INVALID_ARGUMENT);
}

TEST_CASE("run experiment writes outputs") {
  Config cfg;
  REQUIRE(dyncc_config_create_preset(1, 64.0, &cfg.ptr) == DYNCC_OK);
  REQUIRE(dyncc_config_set(cfg.ptr, "experiment.name", "compare") == DYNCC_OK);
  REQUIRE(dyncc_config_set(cfg.ptr, "scenario.repetitions", "3") == DYNCC_OK);
  const auto dir = std::filesystem::temp_directory_path() / "dyncc_c_api_out";
  std::filesystem::remove_all(dir);
  char summary[256] = {};
  REQUIRE(dyncc_run_experiment(cfg.ptr, dir.string().c_str(), summary, sizeof summary) ==
          DYNCC_OK);
  CHECK(std::string(summary).size() > 0);
  CHECK(std::filesystem::exists(dir / "compare.csv"));
  CHECK(std::filesystem::exists(dir / "compare.manifest"));
}
