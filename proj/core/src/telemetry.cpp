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

#include "aepea/telemetry.hpp"

#include <cmath>
#include <sstream>

#include "aepea/errors.hpp"

namespace aepea {

double motor_current(double tau, double torque_constant) {
  if (!(torque_constant > 0.0)) {
    throw ConfigError("motor torque constant must be > 0");
  }
  return tau / torque_constant;
}

double electrical_power(double current, double voltage) {
  return std::abs(current) * voltage;
}

double mechanical_power(double tau, double omega) { return tau * omega; }

TelemetryRecord accumulate(const std::optional<TelemetryRecord>& prev,
                           const ActuatorState& s, const MotorCommand& cmd,
                           const ActuatorParams& p, double dt) {
  const bool finite = std::isfinite(s.t) && std::isfinite(s.q_main) &&
                      std::isfinite(s.qd_main) && std::isfinite(s.q_adjuster) &&
                      std::isfinite(s.qd_adjuster) && std::isfinite(cmd.main) &&
                      std::isfinite(cmd.adjuster) && std::isfinite(dt);
  if (!finite) {
    std::ostringstream msg;
    msg << "non-finite telemetry input at t = " << s.t << " s";
    throw SimulationFault(FaultKind::kNonFinite, msg.str());
  }

  TelemetryRecord r;
  r.t = s.t;
  r.q_main = s.q_main;
  r.q_eq = equilibrium_of(s, p);
  r.delta_l = deflection(s, p);
  r.qd_main = s.qd_main;
  r.qd_adjuster = s.qd_adjuster;
  r.tau_main_cmd = cmd.main;
  r.tau_adjuster_cmd = cmd.adjuster;
  r.tau_spring = -spring_torques(r.delta_l, p).on_load;
  r.current_main = motor_current(cmd.main, p.main_torque_constant);
  r.current_adjuster = motor_current(cmd.adjuster, p.adjuster_torque_constant);
  r.p_main_elec = electrical_power(r.current_main, p.supply_voltage);
  r.p_adjuster_elec = electrical_power(r.current_adjuster, p.supply_voltage);
  r.p_main_mech = mechanical_power(cmd.main, s.qd_main);
  r.p_adjuster_mech = mechanical_power(cmd.adjuster, s.qd_adjuster);
  r.energy_spring = spring_energy(r.delta_l, p);
  r.mode = s.mode;

  if (prev) {
    if (!(dt > 0.0)) throw ConfigError("telemetry dt must be > 0");
    r.energy_main =
        prev->energy_main + 0.5 * dt * (prev->p_main_elec + r.p_main_elec);
    r.energy_adjuster = prev->energy_adjuster +
                        0.5 * dt * (prev->p_adjuster_elec + r.p_adjuster_elec);
  }
  return r;
}

std::vector<double> direct_drive_counterfactual(
    std::span<const TelemetryRecord> records, const ActuatorParams& params,
    const LoadModel& load) {
  std::vector<double> power(records.size(), 0.0);
  if (records.empty()) return power;

  const double inertia = load_side_inertia(params);
  const std::size_t last = records.size() - 1;
  for (std::size_t i = 0; i < records.size(); ++i) {
    double accel = 0.0;
    if (last > 0) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = i == last ? last : i + 1;
      const double span = records[hi].t - records[lo].t;
      if (span > 0.0) {
        accel = (records[hi].qd_main - records[lo].qd_main) / span;
      }
    }
    const double tau = inertia * accel -
                       external_torque(load, records[i].q_main, records[i].t);
    power[i] = electrical_power(motor_current(tau, params.main_torque_constant),
                                params.supply_voltage);
  }
  return power;
}

}  // namespace aepea
