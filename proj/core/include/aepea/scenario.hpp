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

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "aepea/control.hpp"
#include "aepea/core_model.hpp"
#include "aepea/dynamics.hpp"
#include "aepea/telemetry.hpp"

namespace aepea {

// Script steps.
struct Hold {
  double duration;  // s, zero motor torque
};
struct AttachPayload {
  double mass;   // kg
  double lever;  // m
};
struct DetachPayload {};
struct ChangeEquilibrium {
  double target;  // rad
};
/// Damped wait until the load is at static rest.
struct SettleWait {
  double vel_tol;  // rad/s
};

using ScenarioStep = std::variant<Hold, AttachPayload, DetachPayload,
                                  ChangeEquilibrium, SettleWait>;

struct Phase {
  std::string name;
  std::vector<ScenarioStep> steps;
};

struct ScenarioScript {
  double initial_equilibrium = 0.0;  // rad
  std::vector<Phase> phases;
};

struct SimSettings {
  double dt = 1e-4;
  int telemetry_decimation = 10;
  int control_decimation = 1;
  double settle_damping = 3.0;      // Nm·s/rad, trim gain inside SettleWait
  double settle_torque_tol = 1e-7;  // Nm, static residual that counts as rest
  double settle_timeout = 60.0;     // s
  double change_timeout = 10.0;     // s
  double joint_limit = std::numbers::pi / 2.0;  // |equilibrium targets|
  double duration_scale = 1.0;      // multiplies Hold durations
  std::uint64_t seed = 0;           // reserved; the simulation is deterministic
  std::string output;
};

struct RunConfig {
  ActuatorParams actuator;
  LoadModel load;  // base load (the bar), payloads come from the script
  SupervisorConfig supervisor;
  SimSettings sim;
};

/// Throws ConfigError. Checks the actuator, load and supervisor blocks too.
void validate(const RunConfig& cfg);

/// Throws ConfigError on non-positive durations, overlapping payloads or
/// equilibrium targets beyond the joint limit.
void validate(const ScenarioScript& script, const RunConfig& cfg);

/// Load angle at which the spring balances the external torque in
/// parallel-elastic mode, k·(q - q_eq) = τ_ext(q), by bisection over the
/// deflection range. Residual <= 1e-10 Nm. Throws SimulationFault
/// (kNoStaticEquilibrium) when the bracket has no sign change.
double static_equilibrium_solve(const ActuatorParams& params,
                                const LoadModel& load, double q_eq,
                                double t = 0.0);

inline constexpr double kStaticResidualTol = 1e-10;

enum class SegmentKind { kHold, kAttach, kDetach, kChange, kSettle };

struct Segment {
  int phase = 0;
  SegmentKind kind = SegmentKind::kHold;
  double t_begin = 0.0;
  double t_end = 0.0;
  std::size_t first_record = 0;  // [first_record, end_record) in records
  std::size_t end_record = 0;
  LoadModel load;         // load active during the segment
  ActuatorParams params;  // actuator params including the load inertia
};

struct PhaseSummary {
  std::string name;
  double t_begin = 0.0;
  double t_end = 0.0;
  double max_abs_deflection = 0.0;
  double max_abs_spring_torque = 0.0;
  double max_abs_tau_main = 0.0;
  double max_abs_tau_adjuster = 0.0;
  double energy_main = 0.0;      // J, electrical
  double energy_adjuster = 0.0;  // J, electrical
  std::optional<double> transition_duration;  // s, VDD entry to lock
  double final_equilibrium = 0.0;
  // Payload-bearing holds only (NaN-free zeros when the phase has none).
  double hold_spring_torque = 0.0;
  double hold_gravity_torque = 0.0;
  double hold_counterfactual_power = 0.0;  // W, springless motor
  double hold_power = 0.0;                 // W, both motors, mean
};

/// Work/energy bookkeeping over the whole run. Motor work is the held torque
/// times the shaft increment of every step, external work uses the
/// trapezoid rule.
struct EnergyBalance {
  double work_main = 0.0;
  double work_adjuster = 0.0;
  double work_external = 0.0;
  double lock_dissipation = 0.0;   // adjuster KE discarded on locking
  double event_dissipation = 0.0;  // KE lost when payloads attach/detach
  double kinetic_begin = 0.0;
  double kinetic_end = 0.0;
  double spring_begin = 0.0;
  double spring_end = 0.0;

  double work_total() const {
    return work_main + work_adjuster + work_external;
  }
  /// ΣW - ΔKE - ΔPE_spring.
  double residual() const {
    return work_total() - (kinetic_end - kinetic_begin) -
           (spring_end - spring_begin);
  }
  /// Same with the locking/attach dissipation booked as sinks.
  double accounted_residual() const {
    return residual() - lock_dissipation - event_dissipation;
  }
};

struct RunResult {
  std::vector<TelemetryRecord> records;
  std::vector<Segment> segments;
  std::vector<PhaseSummary> phases;
  EnergyBalance energy;
  ActuatorState final_state;
};

/// Runs the script through supervisor, dynamics and telemetry. The actuator
/// starts in parallel-elastic mode at static rest about the script's initial
/// equilibrium. Faults are rethrown with the phase index attached.
RunResult run_scenario(const ScenarioScript& script, const RunConfig& cfg);

/// Payload lever that makes the gravity moment at q = -45 deg equal
/// `holding_torque` for the given payload on top of the base bar.
double calibrate_payload_lever(const LoadModel& bar, double payload_mass,
                               double holding_torque);

struct ReferenceExperiment {
  ScenarioScript script;
  RunConfig config;
};

/// Three-phase load-holding / equilibrium-change experiment on the
/// prototype: 2.3 kg hold at -45 deg, change to +45 deg, 4.5 kg hold.
ReferenceExperiment reference_experiment();

inline constexpr double kReferenceBarMass = 1.9;      // kg
inline constexpr double kReferenceBarLength = 0.61;   // m
inline constexpr double kReferenceLightPayload = 2.3;  // kg
inline constexpr double kReferenceHeavyPayload = 4.5;  // kg
inline constexpr double kReferenceHoldingTorque = 4.7;  // Nm
inline constexpr double kReferenceHoldDuration = 5.0;   // s

}  // namespace aepea
