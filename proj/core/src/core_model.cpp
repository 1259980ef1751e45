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

#include "aepea/core_model.hpp"

#include <cmath>
#include <sstream>

#include "aepea/errors.hpp"

namespace aepea {

namespace {

void require(bool ok, const char* field, const char* rule, double value) {
  if (!ok) {
    std::ostringstream msg;
    msg << "actuator." << field << " must be " << rule << " (got " << value
        << ")";
    throw ConfigError(msg.str());
  }
}

void require_positive(const char* field, double value) {
  require(std::isfinite(value) && value > 0.0, field, "> 0", value);
}

}  // namespace

const char* to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::kOverdeflection: return "spring overdeflection";
    case FaultKind::kNonFinite: return "non-finite state";
    case FaultKind::kTableRange: return "torque table query out of range";
    case FaultKind::kNoStaticEquilibrium: return "no static equilibrium";
    case FaultKind::kTimeout: return "timeout";
  }
  return "unknown fault";
}

void validate(const ActuatorParams& p) {
  require_positive("main_rotor_inertia", p.main_rotor_inertia);
  require_positive("load_inertia", p.load_inertia);
  require_positive("adjuster_rotor_inertia", p.adjuster_rotor_inertia);
  require_positive("worm_inertia", p.worm_inertia);
  require_positive("worm_wheel_inertia", p.worm_wheel_inertia);
  require(std::isfinite(p.gear_ratio) && p.gear_ratio >= 1.0, "gear_ratio",
          ">= 1", p.gear_ratio);
  require_positive("stiffness", p.stiffness);
  require_positive("nulling_rate", p.nulling_rate);
  require_positive("main_torque_limit", p.main_torque_limit);
  require_positive("adjuster_torque_limit", p.adjuster_torque_limit);
  require_positive("main_torque_constant", p.main_torque_constant);
  require_positive("adjuster_torque_constant", p.adjuster_torque_constant);
  require_positive("supply_voltage", p.supply_voltage);
  require_positive("max_deflection", p.max_deflection);
}

std::string_view to_string(Mode mode) {
  return mode == Mode::kParallelElastic ? "PE" : "VDD";
}

double load_side_inertia(const ActuatorParams& p) {
  return p.main_rotor_inertia + p.load_inertia;
}

double adjuster_side_inertia(const ActuatorParams& p) {
  return p.adjuster_rotor_inertia + p.worm_inertia +
         p.worm_wheel_inertia / (p.gear_ratio * p.gear_ratio);
}

double spring_deflection(double q_main, double q_adjuster, double gear_ratio) {
  return q_main - q_adjuster / gear_ratio;
}

SpringTorques spring_torques(double deflection, const ActuatorParams& p) {
  const double on_load = -p.stiffness * deflection;
  return {on_load, -on_load / p.gear_ratio};
}

double equilibrium_position(double q_adjuster, double gear_ratio) {
  return q_adjuster / gear_ratio;
}

double spring_energy(double deflection, const ActuatorParams& p) {
  return 0.5 * p.stiffness * deflection * deflection;
}

DesignCheck validate_design(const ActuatorParams& p) {
  DesignCheck check;
  check.force_ratio =
      p.gear_ratio * adjuster_side_inertia(p) / load_side_inertia(p);
  if (check.force_ratio >= kForceRatioWarnThreshold) {
    check.flagged = true;
    std::ostringstream msg;
    msg << "force ratio n*m_eq/M_eq = " << check.force_ratio
        << " is not small (threshold " << kForceRatioWarnThreshold
        << "); the adjuster will carry a large share of the main torque";
    check.warning = msg.str();
  }
  return check;
}

}  // namespace aepea
