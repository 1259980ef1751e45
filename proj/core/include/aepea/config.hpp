// Copyright 2026 The aepea Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "aepea/scenario.hpp"

namespace aepea {

/// Flat `section.key = value` text, `#` starts a comment. Keys not present
/// keep the value from `base`; unknown keys are errors. Throws ConfigError
/// with the offending line number.
RunConfig parse_run_config(std::string_view text,
                           const RunConfig& base = reference_experiment().config);

RunConfig load_run_config(const std::filesystem::path& path,
                          const RunConfig& base = reference_experiment().config);

/// Writes every key, so the output parses back to the same config.
std::string format_run_config(const RunConfig& cfg);

/// Line-oriented scenario script:
///
///   initial -0.785398    # starting equilibrium, rad
///   phase light payload hold
///   attach 2.3 0.2946    # mass kg, lever m
///   settle 1e-6          # velocity tolerance rad/s
///   hold 5               # seconds
///   detach
///   change 0.785398      # new equilibrium, rad
ScenarioScript parse_scenario(std::string_view text);

ScenarioScript load_scenario(const std::filesystem::path& path);

std::string format_scenario(const ScenarioScript& script);

}  // namespace aepea
