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

// Experiment config files: INI-style `[section]` headers with `key = value`
// lines. Keys are documented in docs/config.md. Unknown sections or keys are
// validation errors.

#include <string>
#include <utility>
#include <vector>

#include "dyncc/experiments.hpp"

namespace dyncc {

// Ordered "section.key" -> value pairs; a later entry for a key overrides an
// earlier one.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// Reads the file into entries. Throws kValidation on a missing file or a
// malformed line.
ConfigEntries ReadConfigFile(const std::string& path);

// Builds and validates a config. `scenario.preset` (1-4) seeds the scenario
// before other keys apply; `scenario.scale` divides N1 and N2 last.
ExperimentConfig BuildConfig(const ConfigEntries& entries);

ExperimentConfig LoadConfig(const std::string& path);

// Every accepted "section.key".
const std::vector<std::string>& KnownConfigKeys();

// Serializes a config so that BuildConfig(ReadConfig(text)) reproduces it.
std::string FormatConfig(const ExperimentConfig& config);

}  // namespace dyncc
