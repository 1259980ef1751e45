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

#include <stdexcept>
#include <string>

namespace aepea {

/// Invalid parameters, unreadable configuration or malformed scenario files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FaultKind {
  kOverdeflection,
  kNonFinite,
  kTableRange,
  kNoStaticEquilibrium,
  kTimeout,
};

const char* to_string(FaultKind kind);

/// Raised when the simulated actuator leaves its physical envelope or the
/// numerics break down. Carries the phase index once it has propagated
/// through the scenario runner (-1 before that).
class SimulationFault : public std::runtime_error {
 public:
  SimulationFault(FaultKind kind, const std::string& what, int phase = -1)
      : std::runtime_error(what), kind_(kind), phase_(phase) {}

  FaultKind kind() const { return kind_; }
  int phase() const { return phase_; }

 private:
  FaultKind kind_;
  int phase_;
};

}  // namespace aepea
