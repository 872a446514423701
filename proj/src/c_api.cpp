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
#include "dyncc/dyncc.h"

#include <fmt/format.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "dyncc/config.hpp"
#include "dyncc/error.hpp"
#include "dyncc/experiments.hpp"

#ifndef DYNCC_VERSION
#define DYNCC_VERSION "unknown"
#endif

struct dyncc_config {
  dyncc::ConfigEntries entries;
  dyncc::ExperimentConfig config;
};

struct dyncc_episode {
  dyncc::EpisodeMetrics metrics;
  bool recorded = false;
};

namespace {

thread_local std::string g_last_error;

dyncc_status ToStatus(dyncc::ErrorCode code) {
  using dyncc::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return DYNCC_INVALID_ARGUMENT;
    case ErrorCode::kInsufficientResults: return DYNCC_INSUFFICIENT_RESULTS;
    case ErrorCode::kDecodeFailure: return DYNCC_DECODE_FAILURE;
    case ErrorCode::kNotReady: return DYNCC_NOT_READY;
    case ErrorCode::kValidation: return DYNCC_VALIDATION_ERROR;
    case ErrorCode::kIo: return DYNCC_IO_ERROR;
    case ErrorCode::kRuntime: return DYNCC_RUNTIME_ERROR;
  }
  return DYNCC_RUNTIME_ERROR;
}

dyncc_status SetError(dyncc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
dyncc_status Guard(Fn&& fn) noexcept {
  try {
    fn();
    return DYNCC_OK;
  } catch (const dyncc::Error& e) {
    return SetError(ToStatus(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return SetError(DYNCC_RUNTIME_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return SetError(DYNCC_RUNTIME_ERROR, e.what());
  } catch (...) {
    return SetError(DYNCC_RUNTIME_ERROR, "unknown error");
  }
}

void NotNull(const void* p, const char* name) {
  dyncc::Require(p != nullptr, std::string(name) + " must not be NULL");
}

void CopyText(const std::string& text, char* buf, std::size_t capacity, std::size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (buf == nullptr || capacity == 0) return;
  const std::size_t n = std::min(text.size(), capacity - 1);
  std::memcpy(buf, text.data(), n);
  buf[n] = '\0';
}

template <typename T, typename Get>
dyncc_status Getter(const dyncc_episode* ep, T* out, Get get) {
  return Guard([&] {
    NotNull(ep, "episode");
    NotNull(out, "out");
    *out = static_cast<T>(get(ep->metrics));
  });
}

}  // namespace

extern "C" {

const char* dyncc_version(void) { return DYNCC_VERSION; }

const char* dyncc_status_name(dyncc_status status) {
  switch (status) {
    case DYNCC_OK: return "ok";
    case DYNCC_INVALID_ARGUMENT: return "invalid argument";
    case DYNCC_INSUFFICIENT_RESULTS: return "insufficient results";
    case DYNCC_DECODE_FAILURE: return "decode failure";
    case DYNCC_NOT_READY: return "not ready";
    case DYNCC_VALIDATION_ERROR: return "validation error";
    case DYNCC_IO_ERROR: return "i/o error";
    case DYNCC_RUNTIME_ERROR: return "runtime error";
  }
  return "unknown status";
}

const char* dyncc_last_error(void) { return g_last_error.c_str(); }

dyncc_status dyncc_config_create_preset(int preset, double scale, dyncc_config** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = nullptr;
    auto cfg = std::make_unique<dyncc_config>();
    cfg->entries = {{"scenario.preset", std::to_string(preset)},
                    {"scenario.scale", fmt::format("{}", scale)}};
    cfg->config = dyncc::BuildConfig(cfg->entries);
    *out = cfg.release();
  });
}

dyncc_status dyncc_config_load(const char* path, dyncc_config** out) {
  return Guard([&] {
    NotNull(out, "out");
    NotNull(path, "path");
    *out = nullptr;
    auto cfg = std::make_unique<dyncc_config>();
    cfg->entries = dyncc::ReadConfigFile(path);
    cfg->config = dyncc::BuildConfig(cfg->entries);
    *out = cfg.release();
  });
}

dyncc_status dyncc_config_set(dyncc_config* config, const char* key, const char* value) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(key, "key");
    NotNull(value, "value");
    auto entries = config->entries;
    entries.emplace_back(key, value);
    auto built = dyncc::BuildConfig(entries);
    config->entries = std::move(entries);
    config->config = std::move(built);
  });
}

dyncc_status dyncc_config_format(const dyncc_config* config, char* buf, size_t capacity,
                                 size_t* needed) {
  return Guard([&] {
    NotNull(config, "config");
    CopyText(dyncc::FormatConfig(config->config), buf, capacity, needed);
  });
}

void dyncc_config_destroy(dyncc_config* config) { delete config; }

dyncc_status dyncc_run_experiment(const dyncc_config* config, const char* out_dir,
                                  char* summary, size_t capacity) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(out_dir, "out_dir");
    const auto report = dyncc::RunExperiment(config->config, out_dir);
    CopyText(report.summary, summary, capacity, nullptr);
  });
}

dyncc_status dyncc_episode_run(const dyncc_config* config, const char* strategy,
                               uint64_t seed, int record_events, dyncc_episode** out) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(strategy, "strategy");
    NotNull(out, "out");
    *out = nullptr;
    const auto kind = dyncc::ParseStrategy(strategy);
    if (!kind) {
      dyncc::Fail(dyncc::ErrorCode::kInvalidArgument,
                  std::string("unknown strategy '") + strategy +
                      "' (uncoded, coded, dynamic)");
    }
    dyncc::EpisodeOptions options;
    options.record_events = record_events != 0;
    auto ep = std::make_unique<dyncc_episode>();
    ep->metrics = dyncc::RunEpisode(config->config.scenario, *kind, seed, options);
    ep->recorded = options.record_events;
    *out = ep.release();
  });
}

void dyncc_episode_destroy(dyncc_episode* episode) { delete episode; }

dyncc_status dyncc_episode_success(const dyncc_episode* ep, int* out) {
  return Getter(ep, out, [](const auto& m) { return m.outcome.success ? 1 : 0; });
}

dyncc_status dyncc_episode_completion_time(const dyncc_episode* ep, double* out) {
  return Getter(ep, out, [](const auto& m) { return m.outcome.completion_time; });
}

dyncc_status dyncc_episode_horizon(const dyncc_episode* ep, double* out) {
  return Getter(ep, out, [](const auto& m) { return m.horizon; });
}

dyncc_status dyncc_episode_piece_length(const dyncc_episode* ep, size_t* b, size_t* s) {
  return Guard([&] {
    NotNull(ep, "episode");
    if (b) *b = ep->metrics.b;
    if (s) *s = ep->metrics.s;
  });
}

dyncc_status dyncc_episode_pieces_dispatched(const dyncc_episode* ep, size_t* out) {
  return Getter(ep, out, [](const auto& m) { return m.outcome.pieces_dispatched; });
}

dyncc_status dyncc_episode_redundancy_used(const dyncc_episode* ep, size_t* out) {
  return Getter(ep, out, [](const auto& m) { return m.outcome.redundancy_used; });
}

dyncc_status dyncc_episode_event_count(const dyncc_episode* ep, size_t* out) {
  return Getter(ep, out, [](const auto& m) { return m.event_log.size(); });
}

dyncc_status dyncc_episode_result(const dyncc_episode* ep, double* out, size_t capacity,
                                  size_t* length) {
  return Guard([&] {
    NotNull(ep, "episode");
    const auto& result = ep->metrics.outcome.result;
    const std::size_t n = result ? result->size() : 0;
    if (length) *length = n;
    if (out && n > 0) std::copy_n(result->data(), std::min(n, capacity), out);
  });
}

dyncc_status dyncc_episode_write_events(const dyncc_episode* ep, const char* path) {
  return Guard([&] {
    NotNull(ep, "episode");
    NotNull(path, "path");
    if (!ep->recorded) {
      dyncc::Fail(dyncc::ErrorCode::kNotReady, "episode was run without record_events");
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) dyncc::Fail(dyncc::ErrorCode::kIo, std::string("cannot open ") + path);
    dyncc::WriteEventLog(file, ep->metrics.event_log);
    if (!file) dyncc::Fail(dyncc::ErrorCode::kIo, std::string("failed writing ") + path);
  });
}

dyncc_status dyncc_convolve(const double* a, size_t na, const double* x, size_t nx,
                            const char* method, double* out, size_t out_capacity) {
  return Guard([&] {
    NotNull(a, "a");
    NotNull(x, "x");
    NotNull(method, "method");
    NotNull(out, "out");
    dyncc::Require(na > 0 && nx > 0, "inputs must be non-empty");
    dyncc::Require(out_capacity >= na + nx - 1, "output buffer shorter than na + nx - 1");
    const std::string m = method;
    dyncc::RealVector y;
    if (m == "fft") {
      y = dyncc::ConvolveFft({a, na}, {x, nx});
    } else if (m == "direct") {
      y = dyncc::ConvolveDirect({a, na}, {x, nx});
    } else {
      dyncc::Fail(dyncc::ErrorCode::kInvalidArgument, "method must be 'fft' or 'direct'");
    }
    std::copy(y.begin(), y.end(), out);
  });
}

}  // extern "C"
