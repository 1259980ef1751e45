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

#include "aepea/core_model.hpp"
#include "aepea/dynamics.hpp"

namespace aepea {

struct SupervisorConfig {
  double target = 0.0;           // desired equilibrium, rad
  double pos_tol = 1e-3;         // rad
  double defl_tol = 1e-3;        // rad
  double vel_tol = 1e-2;         // rad/s, on the deflection rate
  double arrive_vel_tol = 1e-2;  // rad/s, on the main shaft
  double kp = 20.0;              // Nm/rad
  double kd = 3.0;               // Nm·s/rad
  double trim_kd = 0.0;          // Nm·s/rad, PE damping trim, 0 = off
};

/// Throws ConfigError on non-positive tolerances or kp, or negative kd.
void validate(const SupervisorConfig& cfg);

/// Small-motor torque in parallel-elastic mode: the motor is left
/// uncontrolled and the worm holds the spring.
constexpr double pe_command() { return 0.0; }

/// Spring-nulling law for virtual direct-drive mode.
///
/// With M = M_eq, m = m_eq and the spring torques τs_M = -k·Δl on the load
/// and τs_m = k·Δl/n on the small motor, the shafts obey
///
///   M·q̈_M = τ_M + τs_M,   m·q̈_m = τ_m + τs_m.
///
/// Differentiating Δl = q_M - q_m/n twice,
///
///   Δl̈ = (τ_M + τs_M)/M - (τ_m + τs_m)/(n·m).
///
/// Imposing Δl̈ + 2α·Δl̇ + α²·Δl = 0 and solving for τ_m gives
///
///   τ_m = n·m·[(τ_M + τs_M)/M + 2α·Δl̇ + α²·Δl] - τs_m
///       = n(m/M)·τ_M - (1 + n²·m/M)·τs_m + n·m·(2α·Δl̇ + α²·Δl),
///
/// using τs_M = -n·τs_m. Every term is torque at the small-motor shaft. When
/// the spring is already nulled only the first term survives, so the small
/// motor carries n·m/M of the main torque.
///
/// `tau_main` must be the torque the main motor actually applies over the
/// same control period. External load torque is not part of the law.
double vdd_command(const ActuatorState& state, double tau_main,
                   const ActuatorParams& params);

double pd_position_command(const ActuatorState& state, double q_des,
                           const SupervisorConfig& cfg);

double saturate(double tau, double limit);

struct SupervisorOutput {
  Mode mode;
  MotorCommand command;
  bool main_saturated = false;
  bool adjuster_saturated = false;
};

/// One tick of the mode supervisor.
///
/// Parallel-elastic: stays there while the locked equilibrium is within
/// pos_tol of the target, commanding (−trim_kd·q̇_M, 0). Otherwise it
/// switches to virtual direct-drive in the same tick.
///
/// Virtual direct-drive: PD on the main motor toward the target plus the
/// spring-nulling law on the small motor, both saturated. Locks back into
/// parallel-elastic once the load and the locked equilibrium are both
/// within pos_tol of the target, |Δl| <= defl_tol, |Δl̇| <= vel_tol and
/// |q̇_M| <= arrive_vel_tol.
SupervisorOutput supervisor_step(const ActuatorState& state,
                                 const SupervisorConfig& cfg,
                                 const ActuatorParams& params);

}  // namespace aepea
