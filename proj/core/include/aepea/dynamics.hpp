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

#include <functional>
#include <utility>
#include <vector>

#include "aepea/core_model.hpp"

namespace aepea {

/// Piecewise-linear time -> torque lookup. Knots must be strictly increasing
/// in time; queries outside [front, back] raise a table-range fault.
class TorqueTable {
 public:
  TorqueTable() = default;
  explicit TorqueTable(std::vector<std::pair<double, double>> knots);

  double at(double t) const;
  bool empty() const { return knots_.empty(); }

 private:
  std::vector<std::pair<double, double>> knots_;
};

/// External torque source on the load shaft.
///
/// The pendulum is a bar pivoting on the main shaft plus an optional point
/// payload. q_main = 0 is the horizontal bar, positive angles raise it.
struct LoadModel {
  enum class Kind { kNone, kGravityPendulum, kScriptedTorque };

  Kind kind = Kind::kNone;
  double bar_mass = 0.0;        // kg
  double bar_length = 0.0;      // m
  double bar_com_offset = 0.0;  // m, pivot to bar centre of mass
  double payload_mass = 0.0;    // kg
  double payload_lever = 0.0;   // m
  double gravity = 9.81;        // m/s²
  TorqueTable torque_table;

  static LoadModel none() { return {}; }

  /// Bar with its centre of mass at half length, i.e. pivoting at one end.
  static LoadModel end_pivot_bar(double mass, double length);

  /// Bar clamped at its middle; balanced until a payload is hung on it.
  static LoadModel centred_bar(double mass, double length);

  static LoadModel scripted(TorqueTable table);

  LoadModel with_payload(double mass, double lever) const;
  LoadModel without_payload() const;
  bool has_payload() const { return payload_mass > 0.0; }

  /// Inertia about the pivot, bar by the parallel-axis theorem.
  double inertia() const;

  /// Gravity moment at the horizontal, m_bar·g·d + m_payload·g·l.
  double gravity_moment() const;
};

/// Throws ConfigError on negative masses/lengths or non-positive gravity.
void validate(const LoadModel& load);

struct MotorCommand {
  double main = 0.0;      // Nm on the main shaft
  double adjuster = 0.0;  // Nm on the small-motor shaft
};

struct Accelerations {
  double main;
  double adjuster;
};

double external_torque(const LoadModel& load, double q_main, double t);

/// Returns params whose load inertia also contains the pendulum's inertia.
ActuatorParams with_load_inertia(ActuatorParams params, const LoadModel& load);

/// Equations of motion of the two shafts. Parallel-elastic mode ignores the
/// adjuster command and returns zero adjuster acceleration (self-locking).
/// Throws SimulationFault when |Δl| exceeds the deflection range.
Accelerations accelerations(const ActuatorState& state,
                            const MotorCommand& cmd,
                            const ActuatorParams& params,
                            const LoadModel& load);

/// Maps the sampled state (with its time) to motor torques.
using Controller = std::function<MotorCommand(const ActuatorState&)>;

enum class CommandHold {
  kZeroOrder,  // evaluated once at the start of the step
  kPerStage,   // re-evaluated at every RK4 stage (continuous-time control)
};

/// One classical RK4 step with the command held over the step. In
/// parallel-elastic mode the adjuster pair is frozen, not integrated.
ActuatorState integrate_held(const ActuatorState& state,
                             const MotorCommand& cmd,
                             const ActuatorParams& params,
                             const LoadModel& load, double dt);

ActuatorState step(const ActuatorState& state, const Controller& controller,
                   const ActuatorParams& params, const LoadModel& load,
                   double dt, CommandHold hold = CommandHold::kZeroOrder);

/// Switching into parallel-elastic mode zeroes the adjuster velocity.
ActuatorState mode_transition(const ActuatorState& state, Mode new_mode);

/// Kinetic energy of both shafts.
double kinetic_energy(const ActuatorState& state, const ActuatorParams& params);

}  // namespace aepea
