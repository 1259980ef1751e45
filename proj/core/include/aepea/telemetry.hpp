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

#include <optional>
#include <span>
#include <vector>

#include "aepea/core_model.hpp"
#include "aepea/dynamics.hpp"

namespace aepea {

/// One telemetry sample. Torques are the commands held from this sample to
/// the next one; tau_spring is k·Δl (the torque the spring carries).
struct TelemetryRecord {
  double t = 0.0;
  double q_main = 0.0;
  double q_eq = 0.0;
  double delta_l = 0.0;
  double qd_main = 0.0;
  double qd_adjuster = 0.0;
  double tau_main_cmd = 0.0;
  double tau_adjuster_cmd = 0.0;
  double tau_spring = 0.0;
  double current_main = 0.0;
  double current_adjuster = 0.0;
  double p_main_elec = 0.0;
  double p_adjuster_elec = 0.0;
  double p_main_mech = 0.0;
  double p_adjuster_mech = 0.0;
  double energy_main = 0.0;      // J, running integral of p_main_elec
  double energy_adjuster = 0.0;  // J, running integral of p_adjuster_elec
  double energy_spring = 0.0;    // J, stored
  Mode mode = Mode::kParallelElastic;
};

/// Current drawn for a torque through τ = k_t·I.
double motor_current(double tau, double torque_constant);

/// Supply-side estimate |I|·V; never negative.
double electrical_power(double current, double voltage);

/// Signed shaft power; negative when the load drives the motor.
double mechanical_power(double tau, double omega);

/// Folds one sample into the stream. With no previous record the energy
/// integrals start at zero; otherwise they advance by the trapezoid rule
/// over dt. Throws SimulationFault on non-finite inputs.
TelemetryRecord accumulate(const std::optional<TelemetryRecord>& prev,
                           const ActuatorState& state,
                           const MotorCommand& cmd,
                           const ActuatorParams& params, double dt);

/// Power a springless direct-drive motor would draw to follow the recorded
/// load trajectory: τ = M_eq·q̈_M - τ_ext(q_M), with q̈_M from central
/// differences of the recorded velocity (one-sided at the ends).
std::vector<double> direct_drive_counterfactual(
    std::span<const TelemetryRecord> records, const ActuatorParams& params,
    const LoadModel& load);

}  // namespace aepea
