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

#include "aepea/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "aepea/errors.hpp"

namespace aepea {

TorqueTable::TorqueTable(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i].first > knots_[i - 1].first)) {
      throw ConfigError("torque table times must be strictly increasing");
    }
  }
}

double TorqueTable::at(double t) const {
  if (knots_.empty() || t < knots_.front().first || t > knots_.back().first) {
    std::ostringstream msg;
    msg << "scripted torque queried at t = " << t << " s outside its table";
    throw SimulationFault(FaultKind::kTableRange, msg.str());
  }
  auto hi = std::lower_bound(
      knots_.begin(), knots_.end(), t,
      [](const std::pair<double, double>& k, double v) { return k.first < v; });
  if (hi->first == t) return hi->second;
  auto lo = std::prev(hi);
  const double w = (t - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

LoadModel LoadModel::end_pivot_bar(double mass, double length) {
  LoadModel load;
  load.kind = Kind::kGravityPendulum;
  load.bar_mass = mass;
  load.bar_length = length;
  load.bar_com_offset = 0.5 * length;
  return load;
}

LoadModel LoadModel::centred_bar(double mass, double length) {
  LoadModel load = end_pivot_bar(mass, length);
  load.bar_com_offset = 0.0;
  return load;
}

LoadModel LoadModel::scripted(TorqueTable table) {
  LoadModel load;
  load.kind = Kind::kScriptedTorque;
  load.torque_table = std::move(table);
  return load;
}

LoadModel LoadModel::with_payload(double mass, double lever) const {
  LoadModel load = *this;
  if (load.kind == Kind::kNone) load.kind = Kind::kGravityPendulum;
  load.payload_mass = mass;
  load.payload_lever = lever;
  return load;
}

LoadModel LoadModel::without_payload() const {
  LoadModel load = *this;
  load.payload_mass = 0.0;
  load.payload_lever = 0.0;
  return load;
}

double LoadModel::inertia() const {
  if (kind != Kind::kGravityPendulum) return 0.0;
  const double bar = bar_mass * (bar_length * bar_length / 12.0 +
                                 bar_com_offset * bar_com_offset);
  return bar + payload_mass * payload_lever * payload_lever;
}

double LoadModel::gravity_moment() const {
  return bar_mass * gravity * bar_com_offset +
         payload_mass * gravity * payload_lever;
}

void validate(const LoadModel& load) {
  const std::array<std::pair<const char*, double>, 5> fields{{
      {"bar_mass", load.bar_mass},
      {"bar_length", load.bar_length},
      {"bar_com_offset", load.bar_com_offset},
      {"payload_mass", load.payload_mass},
      {"payload_lever", load.payload_lever},
  }};
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value) || value < 0.0) {
      std::ostringstream msg;
      msg << "load." << name << " must be >= 0 (got " << value << ")";
      throw ConfigError(msg.str());
    }
  }
  if (!(load.gravity > 0.0) || !std::isfinite(load.gravity)) {
    throw ConfigError("load.gravity must be > 0");
  }
}

double external_torque(const LoadModel& load, double q_main, double t) {
  switch (load.kind) {
    case LoadModel::Kind::kNone:
      return 0.0;
    case LoadModel::Kind::kGravityPendulum:
      return -load.gravity_moment() * std::cos(q_main);
    case LoadModel::Kind::kScriptedTorque:
      return load.torque_table.at(t);
  }
  return 0.0;
}

ActuatorParams with_load_inertia(ActuatorParams params, const LoadModel& load) {
  params.load_inertia += load.inertia();
  return params;
}

Accelerations accelerations(const ActuatorState& s, const MotorCommand& cmd,
                            const ActuatorParams& p, const LoadModel& load) {
  const double dl = deflection(s, p);
  if (!std::isfinite(dl) || !std::isfinite(s.qd_main) ||
      !std::isfinite(cmd.main) || !std::isfinite(cmd.adjuster)) {
    std::ostringstream msg;
    msg << "non-finite state or command at t = " << s.t << " s";
    throw SimulationFault(FaultKind::kNonFinite, msg.str());
  }
  if (std::abs(dl) > p.max_deflection) {
    std::ostringstream msg;
    msg << "spring deflection " << dl << " rad exceeds the range of "
        << p.max_deflection << " rad at t = " << s.t << " s";
    throw SimulationFault(FaultKind::kOverdeflection, msg.str());
  }
  const SpringTorques spring = spring_torques(dl, p);
  const double main = (cmd.main + spring.on_load +
                       external_torque(load, s.q_main, s.t)) /
                      load_side_inertia(p);
  if (s.mode == Mode::kParallelElastic) return {main, 0.0};
  return {main, (cmd.adjuster + spring.on_adjuster) / adjuster_side_inertia(p)};
}

namespace {

struct Derivative {
  double q_main, qd_main, q_adjuster, qd_adjuster;
};

Derivative derivative(const ActuatorState& s, const MotorCommand& cmd,
                      const ActuatorParams& p, const LoadModel& load) {
  const Accelerations a = accelerations(s, cmd, p, load);
  return {s.qd_main, a.main, s.qd_adjuster, a.adjuster};
}

ActuatorState advance(const ActuatorState& s, const Derivative& d, double h) {
  ActuatorState out = s;
  out.q_main += h * d.q_main;
  out.qd_main += h * d.qd_main;
  if (s.mode == Mode::kVirtualDirectDrive) {
    out.q_adjuster += h * d.q_adjuster;
    out.qd_adjuster += h * d.qd_adjuster;
  }
  out.t += h;
  return out;
}

template <typename CommandAt>
ActuatorState rk4(const ActuatorState& s, const ActuatorParams& p,
                  const LoadModel& load, double dt, CommandAt&& command_at) {
  if (!(dt > 0.0)) throw ConfigError("integration step must be > 0");

  const double half = 0.5 * dt;
  const Derivative k1 = derivative(s, command_at(s), p, load);
  const ActuatorState s2 = advance(s, k1, half);
  const Derivative k2 = derivative(s2, command_at(s2), p, load);
  const ActuatorState s3 = advance(s, k2, half);
  const Derivative k3 = derivative(s3, command_at(s3), p, load);
  const ActuatorState s4 = advance(s, k3, dt);
  const Derivative k4 = derivative(s4, command_at(s4), p, load);

  const double w = dt / 6.0;
  ActuatorState out = s;
  out.q_main += w * (k1.q_main + 2.0 * k2.q_main + 2.0 * k3.q_main + k4.q_main);
  out.qd_main +=
      w * (k1.qd_main + 2.0 * k2.qd_main + 2.0 * k3.qd_main + k4.qd_main);
  if (s.mode == Mode::kVirtualDirectDrive) {
    out.q_adjuster += w * (k1.q_adjuster + 2.0 * k2.q_adjuster +
                           2.0 * k3.q_adjuster + k4.q_adjuster);
    out.qd_adjuster += w * (k1.qd_adjuster + 2.0 * k2.qd_adjuster +
                            2.0 * k3.qd_adjuster + k4.qd_adjuster);
  }
  out.t = s.t + dt;

  if (!std::isfinite(out.q_main) || !std::isfinite(out.qd_main) ||
      !std::isfinite(out.q_adjuster) || !std::isfinite(out.qd_adjuster)) {
    std::ostringstream msg;
    msg << "state became non-finite at t = " << out.t << " s";
    throw SimulationFault(FaultKind::kNonFinite, msg.str());
  }
  const double dl = deflection(out, p);
  if (std::abs(dl) > p.max_deflection) {
    std::ostringstream msg;
    msg << "spring deflection " << dl << " rad exceeds the range of "
        << p.max_deflection << " rad at t = " << out.t << " s";
    throw SimulationFault(FaultKind::kOverdeflection, msg.str());
  }
  return out;
}

}  // namespace

ActuatorState integrate_held(const ActuatorState& state,
                             const MotorCommand& cmd,
                             const ActuatorParams& params,
                             const LoadModel& load, double dt) {
  return rk4(state, params, load, dt,
             [&cmd](const ActuatorState&) { return cmd; });
}

ActuatorState step(const ActuatorState& state, const Controller& controller,
                   const ActuatorParams& params, const LoadModel& load,
                   double dt, CommandHold hold) {
  if (hold == CommandHold::kZeroOrder) {
    return integrate_held(state, controller(state), params, load, dt);
  }
  return rk4(state, params, load, dt, controller);
}

ActuatorState mode_transition(const ActuatorState& state, Mode new_mode) {
  ActuatorState out = state;
  out.mode = new_mode;
  if (new_mode == Mode::kParallelElastic) out.qd_adjuster = 0.0;
  return out;
}

double kinetic_energy(const ActuatorState& s, const ActuatorParams& p) {
  return 0.5 * load_side_inertia(p) * s.qd_main * s.qd_main +
         0.5 * adjuster_side_inertia(p) * s.qd_adjuster * s.qd_adjuster;
}

}  // namespace aepea
