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
#include "dyncc/config.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>

#include "dyncc/error.hpp"

namespace dyncc {
namespace {

[[noreturn]] void Invalid(const std::string& msg) { Fail(ErrorCode::kValidation, msg); }

template <typename T>
T ParseNumber(const std::string& key, const std::string& raw) {
  const std::string text = boost::algorithm::trim_copy(raw);
  try {
    if constexpr (std::is_unsigned_v<T>) {
      if (!text.empty() && text[0] == '-') throw boost::bad_lexical_cast();
    }
    return boost::lexical_cast<T>(text);
  } catch (const boost::bad_lexical_cast&) {
    Invalid(fmt::format("{}: cannot parse '{}' as a number", key, raw));
  }
}

bool ParseBool(const std::string& key, const std::string& raw) {
  const std::string v = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(raw));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  Invalid(fmt::format("{}: expected true/false, got '{}'", key, raw));
}

template <typename T>
std::vector<T> ParseList(const std::string& key, const std::string& raw) {
  std::vector<std::string> parts;
  const std::string text = boost::algorithm::trim_copy(raw);
  std::vector<T> out;
  if (text.empty()) return out;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(","));
  for (const auto& p : parts) out.push_back(ParseNumber<T>(key, p));
  return out;
}

std::string Trimmed(const std::string& raw) { return boost::algorithm::trim_copy(raw); }

using Setter = std::function<void(ExperimentConfig&, const std::string& key,
                                  const std::string& value)>;

template <typename T>
Setter Number(T ScenarioConfig::*field) {
  return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
    c.scenario.*field = ParseNumber<T>(k, v);
  };
}

template <typename T>
Setter Straggler(T StragglerSpec::*field) {
  return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
    c.scenario.straggler.*field = ParseNumber<T>(k, v);
  };
}

template <typename T>
Setter Comm(T CommParams::*field) {
  return [field](ExperimentConfig& c, const std::string& k, const std::string& v) {
    c.scenario.comm.*field = ParseNumber<T>(k, v);
  };
}

void Ignore(ExperimentConfig&, const std::string&, const std::string&) {}

// scenario.preset and scenario.scale are handled by BuildConfig itself.
const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> setters = {
      {"scenario.preset", Ignore},
      {"scenario.scale", Ignore},
      {"scenario.name",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.name = Trimmed(v);
         if (c.scenario.name.empty()) Invalid(k + " must not be empty");
       }},
      {"scenario.n1", Number(&ScenarioConfig::n1)},
      {"scenario.n2", Number(&ScenarioConfig::n2)},
      {"scenario.workers", Number(&ScenarioConfig::workers)},
      {"scenario.mu_min", Number(&ScenarioConfig::mu_min)},
      {"scenario.mu_max", Number(&ScenarioConfig::mu_max)},
      {"scenario.load_constant", Number(&ScenarioConfig::load_constant)},
      {"scenario.init_box_m", Number(&ScenarioConfig::init_box_m)},
      {"scenario.max_speed_mps", Number(&ScenarioConfig::max_speed_mps)},
      {"scenario.late_workers", Number(&ScenarioConfig::late_workers)},
      {"scenario.join_time_s", Number(&ScenarioConfig::join_time)},
      {"scenario.compute_payload",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.scenario.compute_payload = ParseBool(k, v);
       }},
      {"scenario.horizon_factor", Number(&ScenarioConfig::horizon_factor)},
      {"scenario.decode_seconds_per_op", Number(&ScenarioConfig::decode_seconds_per_op)},
      {"scenario.b", Number(&ScenarioConfig::b)},
      {"scenario.s", Number(&ScenarioConfig::s)},
      {"scenario.repetitions", Number(&ScenarioConfig::repetitions)},
      {"scenario.seed_base", Number(&ScenarioConfig::seed_base)},
      {"straggler.ratio", Straggler(&StragglerSpec::ratio)},
      {"straggler.mode",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const auto mode = ParseStragglerMode(Trimmed(v));
         if (!mode) Invalid(fmt::format("{}: unknown mode '{}' (delayed, fail, leave)", k, v));
         c.scenario.straggler.mode = *mode;
       }},
      {"straggler.delay_factor", Straggler(&StragglerSpec::delay_factor)},
      {"straggler.event_time_s", Straggler(&StragglerSpec::event_time)},
      {"comm.bandwidth_hz", Comm(&CommParams::bandwidth_hz)},
      {"comm.noise_w", Comm(&CommParams::noise_w)},
      {"comm.bytes_per_number", Comm(&CommParams::bytes_per_number)},
      {"comm.signal_model",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const auto m = Trimmed(v);
         if (m == "simplified") {
           c.scenario.comm.model = SignalModel::kSimplified;
         } else if (m == "full") {
           c.scenario.comm.model = SignalModel::kFull;
         } else {
           Invalid(fmt::format("{}: unknown model '{}' (simplified, full)", k, v));
         }
       }},
      {"comm.tx_power_dbm", Comm(&CommParams::tx_power_dbm)},
      {"comm.wavelength_m", Comm(&CommParams::wavelength_m)},
      {"comm.gain_dbi", Comm(&CommParams::gain_dbi)},
      {"comm.noise_sigma_db", Comm(&CommParams::noise_sigma_db)},
      {"experiment.name",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const auto kind = ParseExperiment(Trimmed(v));
         if (!kind) {
           Invalid(fmt::format("{}: unknown experiment '{}' ({})", k, v, ExperimentNames()));
         }
         c.kind = *kind;
       }},
      {"experiment.b_values",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.b_values = ParseList<std::size_t>(k, v);
       }},
      {"experiment.ratio",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.ratio = ParseNumber<double>(k, v);
       }},
      {"experiment.b_sweep_ratio",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.b_sweep_ratio = ParseNumber<double>(k, v);
       }},
      {"experiment.ratios",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.ratios = ParseList<double>(k, v);
       }},
      {"experiment.runs",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.runs = ParseNumber<std::size_t>(k, v);
       }},
      {"experiment.failure_distribution",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const auto d = ParseFailureDistribution(Trimmed(v));
         if (!d) {
           Invalid(fmt::format("{}: unknown distribution '{}' (uniform-count, independent)",
                               k, v));
         }
         c.failure_distribution = *d;
       }},
      {"experiment.failure_prob",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.failure_prob = ParseNumber<double>(k, v);
       }},
      {"experiment.threads",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.threads = ParseNumber<unsigned>(k, v);
       }},
      // Written by RunExperiment; informational on reload.
      {"manifest.version", Ignore},
      {"manifest.created_utc", Ignore},
      {"manifest.csv", Ignore},
      {"manifest.seeds", Ignore},
      {"manifest.best_b", Ignore},
      {"manifest.swept_b", Ignore},
  };
  return setters;
}

std::size_t ScaledSize(std::size_t n, double scale) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(
                                      std::llround(static_cast<double>(n) / scale)));
}

}  // namespace

ConfigEntries ReadConfigFile(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) Invalid("config file not found: " + path);
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    Invalid(fmt::format("{}: {}", path, e.what()));
  }
  ConfigEntries entries;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      Invalid(fmt::format("{}: key '{}' must appear inside a [section]", path, section));
    }
    for (const auto& [key, value] : body) {
      entries.emplace_back(section + "." + key, value.data());
    }
  }
  return entries;
}

ExperimentConfig BuildConfig(const ConfigEntries& entries) {
  const auto& setters = Setters();
  for (const auto& [key, value] : entries) {
    if (!setters.contains(key)) Invalid(fmt::format("unknown config key '{}'", key));
  }
  ExperimentConfig config;
  double scale = 1.0;
  for (const auto& [key, value] : entries) {
    if (key == "scenario.preset") {
      const int preset = ParseNumber<int>(key, value);
      config.scenario = PresetScenario(preset);
    } else if (key == "scenario.scale") {
      scale = ParseNumber<double>(key, value);
      if (!(scale > 0.0)) Invalid("scenario.scale must be > 0");
    }
  }
  for (const auto& [key, value] : entries) setters.at(key)(config, key, value);
  config.scenario.n1 = ScaledSize(config.scenario.n1, scale);
  config.scenario.n2 = ScaledSize(config.scenario.n2, scale);
  ValidateExperiment(config);
  return config;
}

ExperimentConfig LoadConfig(const std::string& path) {
  return BuildConfig(ReadConfigFile(path));
}

const std::vector<std::string>& KnownConfigKeys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [key, setter] : Setters()) out.push_back(key);
    return out;
  }();
  return keys;
}

std::string FormatConfig(const ExperimentConfig& c) {
  const auto& s = c.scenario;
  std::string out;
  auto line = [&out](const std::string& key, const auto& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  out += "[scenario]\n";
  line("name", s.name);
  line("n1", s.n1);
  line("n2", s.n2);
  line("workers", s.workers);
  line("mu_min", s.mu_min);
  line("mu_max", s.mu_max);
  line("load_constant", s.load_constant);
  line("init_box_m", s.init_box_m);
  line("max_speed_mps", s.max_speed_mps);
  line("late_workers", s.late_workers);
  line("join_time_s", s.join_time);
  line("compute_payload", s.compute_payload ? "true" : "false");
  line("horizon_factor", s.horizon_factor);
  line("decode_seconds_per_op", s.decode_seconds_per_op);
  line("b", s.b);
  line("s", s.s);
  line("repetitions", s.repetitions);
  line("seed_base", s.seed_base);
  out += "\n[straggler]\n";
  line("ratio", s.straggler.ratio);
  line("mode", ToString(s.straggler.mode));
  line("delay_factor", s.straggler.delay_factor);
  line("event_time_s", s.straggler.event_time);
  out += "\n[comm]\n";
  line("bandwidth_hz", s.comm.bandwidth_hz);
  line("noise_w", s.comm.noise_w);
  line("bytes_per_number", s.comm.bytes_per_number);
  line("signal_model", s.comm.model == SignalModel::kFull ? "full" : "simplified");
  line("tx_power_dbm", s.comm.tx_power_dbm);
  line("wavelength_m", s.comm.wavelength_m);
  line("gain_dbi", s.comm.gain_dbi);
  line("noise_sigma_db", s.comm.noise_sigma_db);
  out += "\n[experiment]\n";
  line("name", ToString(c.kind));
  line("b_values", fmt::format("{}", fmt::join(c.b_values, ",")));
  line("ratio", c.ratio);
  line("b_sweep_ratio", c.b_sweep_ratio);
  line("ratios", fmt::format("{}", fmt::join(c.ratios, ",")));
  line("runs", c.runs);
  line("failure_distribution", ToString(c.failure_distribution));
  line("failure_prob", c.failure_prob);
  line("threads", c.threads);
  return out;
}

}  // namespace dyncc
