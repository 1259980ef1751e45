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

#include "aepea/control.hpp"

#include <algorithm>
#include <cmath>

#include "aepea/errors.hpp"

namespace aepea {

void validate(const SupervisorConfig& cfg) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(cfg.pos_tol) || !positive(cfg.defl_tol) ||
      !positive(cfg.vel_tol) || !positive(cfg.arrive_vel_tol)) {
    throw ConfigError("supervisor tolerances must be > 0");
  }
  if (!positive(cfg.kp)) throw ConfigError("supervisor.kp must be > 0");
  if (!std::isfinite(cfg.kd) || cfg.kd < 0.0) {
    throw ConfigError("supervisor.kd must be >= 0");
  }
  if (!std::isfinite(cfg.trim_kd) || cfg.trim_kd < 0.0) {
    throw ConfigError("supervisor.trim_kd must be >= 0");
  }
  if (!std::isfinite(cfg.target)) {
    throw ConfigError("supervisor.target must be finite");
  }
}

double vdd_command(const ActuatorState& s, double tau_main,
                   const ActuatorParams& p) {
  const double n = p.gear_ratio;
  const double m = adjuster_side_inertia(p);
  const double mass_ratio = m / load_side_inertia(p);
  const double dl = deflection(s, p);
  const double dl_rate = deflection_rate(s, p);
  const double alpha = p.nulling_rate;
  const double spring_on_adjuster = spring_torques(dl, p).on_adjuster;

  return n * mass_ratio * tau_main -
         (1.0 + n * n * mass_ratio) * spring_on_adjuster +
         n * m * (2.0 * alpha * dl_rate + alpha * alpha * dl);
}

double pd_position_command(const ActuatorState& s, double q_des,
                           const SupervisorConfig& cfg) {
  return cfg.kp * (q_des - s.q_main) - cfg.kd * s.qd_main;
}

double saturate(double tau, double limit) {
  return std::clamp(tau, -limit, limit);
}

namespace {

MotorCommand parallel_elastic_command(const ActuatorState& s,
                                      const SupervisorConfig& cfg,
                                      const ActuatorParams& p,
                                      bool* main_saturated) {
  const double trim = -cfg.trim_kd * s.qd_main;
  const double main = saturate(trim, p.main_torque_limit);
  *main_saturated = main != trim;
  return {main, pe_command()};
}

bool arrived(const ActuatorState& s, const SupervisorConfig& cfg,
             const ActuatorParams& p) {
  return std::abs(s.q_main - cfg.target) <= cfg.pos_tol &&
         std::abs(equilibrium_of(s, p) - cfg.target) <= cfg.pos_tol &&
         std::abs(deflection(s, p)) <= cfg.defl_tol &&
         std::abs(deflection_rate(s, p)) <= cfg.vel_tol &&
         std::abs(s.qd_main) <= cfg.arrive_vel_tol;
}

}  // namespace

SupervisorOutput supervisor_step(const ActuatorState& s,
                                 const SupervisorConfig& cfg,
                                 const ActuatorParams& p) {
  SupervisorOutput out{s.mode, {}, false, false};

  if (s.mode == Mode::kParallelElastic) {
    if (std::abs(cfg.target - equilibrium_of(s, p)) <= cfg.pos_tol) {
      out.command = parallel_elastic_command(s, cfg, p, &out.main_saturated);
      return out;
    }
    out.mode = Mode::kVirtualDirectDrive;
  } else if (arrived(s, cfg, p)) {
    out.mode = Mode::kParallelElastic;
    out.command = parallel_elastic_command(s, cfg, p, &out.main_saturated);
    return out;
  }

  const double main_request = pd_position_command(s, cfg.target, cfg);
  const double main = saturate(main_request, p.main_torque_limit);
  const double adjuster_request = vdd_command(s, main, p);
  const double adjuster = saturate(adjuster_request, p.adjuster_torque_limit);
  out.command = {main, adjuster};
  out.main_saturated = main != main_request;
  out.adjuster_saturated = adjuster != adjuster_request;
  return out;
}

}  // namespace aepea
