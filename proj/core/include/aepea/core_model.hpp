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

#include <string>
#include <string_view>

namespace aepea {

/// Physical constants of the actuator.
///
/// Everything is rotational: inertias in kg·m², torques in Nm, angles in rad.
/// "Main" is the direct-drive motor carrying the load, "adjuster" is the
/// small motor driving the worm that sets the spring equilibrium.
struct ActuatorParams {
  double main_rotor_inertia = 0.01;    // kg·m² (placeholder)
  double load_inertia = 0.002;         // kg·m², reflected to the main shaft
  double adjuster_rotor_inertia = 1e-5;
  double worm_inertia = 5e-6;
  double worm_wheel_inertia = 3.6e-3;
  double gear_ratio = 60.0;            // worm : worm wheel
  double stiffness = 21.0;             // Nm/rad
  double nulling_rate = 20.0;          // 1/s, pole of the deflection dynamics
  double main_torque_limit = 1.6;      // Nm, continuous rating
  double adjuster_torque_limit = 0.0303;  // Nm at the small-motor shaft
  double main_torque_constant = 0.2;      // Nm/A (placeholder)
  double adjuster_torque_constant = 0.0109;  // Nm/A (placeholder)
  double supply_voltage = 24.0;           // V (placeholder)
  double max_deflection = 1.3089969389957472;  // 75 deg

  /// Prototype values; the inertias and electrical constants are
  /// placeholders, stiffness/ratio/limits are the published ones.
  static ActuatorParams reference() { return {}; }
};

/// Throws ConfigError naming the first field that violates positivity.
void validate(const ActuatorParams& params);

enum class Mode { kParallelElastic, kVirtualDirectDrive };

/// "PE" / "VDD", the spelling used in telemetry files.
std::string_view to_string(Mode mode);

struct ActuatorState {
  double q_main = 0.0;       // load / main shaft angle, rad
  double qd_main = 0.0;
  double q_adjuster = 0.0;   // small-motor shaft angle, rad
  double qd_adjuster = 0.0;  // held at exactly 0 in parallel-elastic mode
  Mode mode = Mode::kParallelElastic;
  double t = 0.0;
};

struct SpringTorques {
  double on_load;      // applied to the main shaft, -k·Δl
  double on_adjuster;  // applied to the small-motor shaft, k·Δl/n
};

// M_eq = main rotor + load.
double load_side_inertia(const ActuatorParams& params);

// m_eq = rotor + worm + worm wheel / n², everything seen at the small-motor shaft.
double adjuster_side_inertia(const ActuatorParams& params);

double spring_deflection(double q_main, double q_adjuster, double gear_ratio);

SpringTorques spring_torques(double deflection, const ActuatorParams& params);

/// Load angle at which the spring is undeformed for a given worm position.
double equilibrium_position(double q_adjuster, double gear_ratio);

double spring_energy(double deflection, const ActuatorParams& params);

/// Ratio n·m_eq/M_eq must be much smaller than one for the adjuster torque
/// to stay negligible next to the main motor's.
inline constexpr double kForceRatioWarnThreshold = 0.1;

struct DesignCheck {
  double force_ratio = 0.0;
  bool flagged = false;
  std::string warning;  // empty unless flagged
};

DesignCheck validate_design(const ActuatorParams& params);

inline double deflection(const ActuatorState& s, const ActuatorParams& p) {
  return spring_deflection(s.q_main, s.q_adjuster, p.gear_ratio);
}

inline double deflection_rate(const ActuatorState& s, const ActuatorParams& p) {
  return s.qd_main - s.qd_adjuster / p.gear_ratio;
}

inline double equilibrium_of(const ActuatorState& s, const ActuatorParams& p) {
  return equilibrium_position(s.q_adjuster, p.gear_ratio);
}

}  // namespace aepea
