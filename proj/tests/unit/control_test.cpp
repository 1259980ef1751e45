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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "aepea/errors.hpp"
#include "aepea/scenario.hpp"
#include "oracles.hpp"

namespace aepea {
namespace {

constexpr double kPi = std::numbers::pi;

// Reference actuator carrying a 1.09 kg·m² load: M_eq = 1.10, m_eq = 1.6e-5.
ActuatorParams loaded_params() {
  ActuatorParams p = ActuatorParams::reference();
  p.load_inertia = 1.09;
  return p;
}

ActuatorState vdd_state(double dl, double dl_rate, const ActuatorParams& p) {
  ActuatorState s;
  s.mode = Mode::kVirtualDirectDrive;
  s.q_adjuster = 0.3 * p.gear_ratio;
  s.q_main = 0.3 + dl;
  s.qd_main = dl_rate;
  return s;
}

// Deflection acceleration of the free-body plant for a given small-motor
// torque, written out independently of the library.
double plant_deflection_accel(const ActuatorState& s, double tau_main,
                              double tau_adj, const ActuatorParams& p) {
  const double n = p.gear_ratio;
  const double big = p.main_rotor_inertia + p.load_inertia;
  const double small = p.adjuster_rotor_inertia + p.worm_inertia +
                       p.worm_wheel_inertia / (n * n);
  const double dl = s.q_main - s.q_adjuster / n;
  const double qdd_main = (tau_main - p.stiffness * dl) / big;
  const double qdd_adj = (tau_adj + p.stiffness * dl / n) / small;
  return qdd_main - qdd_adj / n;
}

double nulling_oracle(const ActuatorState& s, double tau_main,
                      const ActuatorParams& p) {
  const double a = p.nulling_rate;
  const double dl = s.q_main - s.q_adjuster / p.gear_ratio;
  const double dl_rate = s.qd_main - s.qd_adjuster / p.gear_ratio;
  const double wanted = -2.0 * a * dl_rate - a * a * dl;
  return oracle::torque_for_deflection_accel(
      [&](double tau) { return plant_deflection_accel(s, tau_main, tau, p); },
      wanted);
}

TEST(PeCommand, IsZero) { EXPECT_EQ(pe_command(), 0.0); }

TEST(VddCommand, NothingToNull) {
  const ActuatorParams p = loaded_params();
  EXPECT_EQ(vdd_command(vdd_state(0.0, 0.0, p), 0.0, p), 0.0);
}

TEST(VddCommand, FeedforwardOfMainTorque) {
  const ActuatorParams p = loaded_params();
  EXPECT_NEAR(vdd_command(vdd_state(0.0, 0.0, p), 1.6, p),
              60.0 * (1.6e-5 / 1.10) * 1.6, 1e-15);
}

TEST(VddCommand, DeflectionTermMatchesOracle) {
  const ActuatorParams p = loaded_params();
  const ActuatorState s = vdd_state(0.05, 0.0, p);
  const double expected = nulling_oracle(s, 0.0, p);
  EXPECT_NEAR(expected, 7.836363636363e-4, 1e-12);
  EXPECT_NEAR(vdd_command(s, 0.0, p), expected, 1e-12);
}

TEST(VddCommand, MatchesOracleOnRandomStates) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dl(-0.2, 0.2);
  std::uniform_real_distribution<double> rate(-3.0, 3.0);
  std::uniform_real_distribution<double> tau(-1.6, 1.6);
  std::uniform_real_distribution<double> load(0.0, 2.0);
  std::uniform_real_distribution<double> ratio(10.0, 120.0);
  for (int i = 0; i < 200; ++i) {
    ActuatorParams p = ActuatorParams::reference();
    p.load_inertia = load(rng);
    p.gear_ratio = ratio(rng);
    ActuatorState s = vdd_state(dl(rng), rate(rng), p);
    s.qd_adjuster = rate(rng) * p.gear_ratio;
    const double t = tau(rng);
    const double expected = nulling_oracle(s, t, p);
    EXPECT_NEAR(vdd_command(s, t, p), expected,
                1e-9 * std::max(1.0, std::abs(expected)));
  }
}

TEST(PdPositionCommand, Examples) {
  SupervisorConfig cfg;
  ActuatorState s;
  s.q_main = 0.4;
  EXPECT_EQ(pd_position_command(s, 0.4, cfg), 0.0);
  cfg.kp = 20.0;
  cfg.kd = 0.0;
  s.q_main = 0.0;
  EXPECT_NEAR(pd_position_command(s, 0.1, cfg), 2.0, 1e-15);
  cfg.kd = 3.0;
  s.qd_main = 0.5;
  EXPECT_NEAR(pd_position_command(s, 0.1, cfg), 0.5, 1e-15);
}

// Linear PD on a rigid inertia: M·q̈ = kp·(q_des − q) − kd·q̇.
TEST(PdPositionCommand, ClosedLoopMatchesSecondOrderResponse) {
  const ActuatorParams p = loaded_params();
  SupervisorConfig cfg;
  cfg.kp = 4.0;
  cfg.kd = 4.0;
  const double big = load_side_inertia(p);
  const double wn = std::sqrt(cfg.kp / big);
  const double zeta = cfg.kd / (2.0 * std::sqrt(cfg.kp * big));
  const double wd = wn * std::sqrt(1.0 - zeta * zeta);
  const double q_des = 0.2;

  ActuatorState s = vdd_state(0.0, 0.0, p);
  const double q0 = s.q_main;
  const Controller ctrl = [&](const ActuatorState& st) {
    const double tau = pd_position_command(st, q_des, cfg);
    return MotorCommand{tau, vdd_command(st, tau, p)};
  };
  double max_err = 0.0;
  const double dt = 1e-4;
  for (int i = 1; i <= 30000; ++i) {
    s = step(s, ctrl, p, LoadModel::none(), dt, CommandHold::kPerStage);
    const double t = i * dt;
    const double e = (q0 - q_des) * std::exp(-zeta * wn * t) *
                     (std::cos(wd * t) + zeta * wn / wd * std::sin(wd * t));
    max_err = std::max(max_err, std::abs(s.q_main - (q_des + e)));
  }
  EXPECT_LE(max_err, 1e-6);
}

TEST(Saturate, Examples) {
  EXPECT_EQ(saturate(0.5, 1.6), 0.5);
  EXPECT_EQ(saturate(2.4, 1.6), 1.6);
  EXPECT_EQ(saturate(-0.05, 0.0303), -0.0303);
}

TEST(Saturate, BoundedAndIdempotent) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x(-10.0, 10.0);
  std::uniform_real_distribution<double> lim(1e-3, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = x(rng);
    const double l = lim(rng);
    const double once = saturate(v, l);
    EXPECT_LE(std::abs(once), l);
    EXPECT_EQ(saturate(once, l), once);
    if (std::abs(v) <= l) EXPECT_EQ(once, v);
  }
}

TEST(Supervisor, StaysLockedAtTarget) {
  const ActuatorParams p = ActuatorParams::reference();
  ActuatorState s;
  s.q_adjuster = -kPi / 4.0 * p.gear_ratio;
  s.q_main = -kPi / 4.0 + 0.02;
  SupervisorConfig cfg;
  cfg.target = -kPi / 4.0;
  const SupervisorOutput out = supervisor_step(s, cfg, p);
  EXPECT_EQ(out.mode, Mode::kParallelElastic);
  EXPECT_EQ(out.command.main, 0.0);
  EXPECT_EQ(out.command.adjuster, 0.0);
}

TEST(Supervisor, UnlocksForNewTarget) {
  const ActuatorParams p = ActuatorParams::reference();
  ActuatorState s;
  s.q_adjuster = -kPi / 4.0 * p.gear_ratio;
  s.q_main = -kPi / 4.0;
  SupervisorConfig cfg;
  cfg.target = kPi / 4.0;
  const SupervisorOutput out = supervisor_step(s, cfg, p);
  EXPECT_EQ(out.mode, Mode::kVirtualDirectDrive);
  EXPECT_EQ(out.command.main, p.main_torque_limit);
  EXPECT_TRUE(out.main_saturated);
}

TEST(Supervisor, LocksOnArrival) {
  const ActuatorParams p = ActuatorParams::reference();
  ActuatorState s;
  s.mode = Mode::kVirtualDirectDrive;
  s.q_adjuster = 0.5 * p.gear_ratio + 1e-5;
  s.q_main = 0.5 + 2e-4;
  s.qd_main = 1e-3;
  SupervisorConfig cfg;
  cfg.target = 0.5;
  const SupervisorOutput out = supervisor_step(s, cfg, p);
  EXPECT_EQ(out.mode, Mode::kParallelElastic);
  EXPECT_EQ(out.command.adjuster, 0.0);

  // Still moving: keeps nulling.
  s.qd_main = 0.5;
  s.qd_adjuster = 0.5 * p.gear_ratio;
  EXPECT_EQ(supervisor_step(s, cfg, p).mode, Mode::kVirtualDirectDrive);
}

TEST(Supervisor, TrimDampsInParallelElasticMode) {
  const ActuatorParams p = ActuatorParams::reference();
  ActuatorState s;
  s.qd_main = 0.2;
  SupervisorConfig cfg;
  cfg.trim_kd = 3.0;
  const SupervisorOutput out = supervisor_step(s, cfg, p);
  EXPECT_EQ(out.mode, Mode::kParallelElastic);
  EXPECT_NEAR(out.command.main, -0.6, 1e-15);
  EXPECT_EQ(out.command.adjuster, 0.0);
}

TEST(Supervisor, ValidateRejectsBadGains) {
  SupervisorConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.kp = 0.0;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = {};
  cfg.kd = -1.0;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = {};
  cfg.pos_tol = 0.0;
  EXPECT_THROW(validate(cfg), ConfigError);
}

struct ClosedLoopRun {
  bool locked = false;
  double time = 0.0;
  bool pe_torque_nonzero = false;
  ActuatorState final_state;
};

ClosedLoopRun run_supervisor(double start, double target,
                             const ActuatorParams& p) {
  SupervisorConfig cfg;
  cfg.target = target;
  ActuatorState s;
  s.q_adjuster = start * p.gear_ratio;
  s.q_main = start;
  ClosedLoopRun run;
  const double dt = 1e-4;
  bool left = false;
  for (int i = 0; i < 100000; ++i) {
    const SupervisorOutput out = supervisor_step(s, cfg, p);
    if (out.mode == Mode::kParallelElastic && out.command.adjuster != 0.0) {
      run.pe_torque_nonzero = true;
    }
    if (out.mode == Mode::kVirtualDirectDrive) left = true;
    if (left && out.mode == Mode::kParallelElastic) {
      run.locked = true;
      run.time = i * dt;
      break;
    }
    s = mode_transition(s, out.mode);
    s = integrate_held(s, out.command, p, LoadModel::none(), dt);
  }
  run.final_state = s;
  return run;
}

TEST(Supervisor, ReachesTargetWithinTimeout) {
  const RunConfig ref = reference_experiment().config;
  const ActuatorParams p = with_load_inertia(ref.actuator, ref.load);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-kPi / 2.0, kPi / 2.0);
  for (int i = 0; i < 20; ++i) {
    const double start = angle(rng);
    const double target = angle(rng);
    const ClosedLoopRun run = run_supervisor(start, target, p);
    ASSERT_TRUE(run.locked) << start << " -> " << target;
    EXPECT_LE(run.time, 10.0);
    EXPECT_FALSE(run.pe_torque_nonzero);
    EXPECT_NEAR(equilibrium_of(run.final_state, p), target, 1e-3);
  }
}

TEST(Supervisor, AdjusterTorqueTracksMainTorqueOnceNulled) {
  const ActuatorParams p = loaded_params();
  SupervisorConfig cfg;
  cfg.target = 0.8;
  ActuatorState s;
  const double bound_gain = 1.05 * p.gear_ratio * adjuster_side_inertia(p) /
                            load_side_inertia(p);
  bool nulled = false;
  for (int i = 0; i < 30000; ++i) {
    const SupervisorOutput out = supervisor_step(s, cfg, p);
    if (i > 0 && out.mode == Mode::kParallelElastic) break;
    nulled = nulled || (std::abs(deflection(s, p)) < 1e-4 &&
                        std::abs(deflection_rate(s, p)) < 1e-3);
    if (nulled) {
      EXPECT_LE(std::abs(out.command.adjuster),
                bound_gain * std::abs(out.command.main) + 1e-6);
    }
    s = mode_transition(s, out.mode);
    s = integrate_held(s, out.command, p, LoadModel::none(), 1e-4);
  }
  EXPECT_TRUE(nulled);
}

}  // namespace
}  // namespace aepea
