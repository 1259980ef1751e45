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

#include "aepea/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aepea/errors.hpp"

namespace aepea {

void validate(const RunConfig& cfg) {
  validate(cfg.actuator);
  validate(cfg.load);
  validate(cfg.supervisor);
  const SimSettings& s = cfg.sim;
  if (!(s.dt > 0.0) || s.dt > 1e-2) {
    throw ConfigError("sim.dt must be in (0, 1e-2]");
  }
  if (s.telemetry_decimation < 1 || s.control_decimation < 1) {
    throw ConfigError("sim decimation factors must be >= 1");
  }
  if (!(s.settle_torque_tol > 0.0) || !(s.settle_timeout > 0.0) ||
      !(s.change_timeout > 0.0) || !(s.joint_limit > 0.0) ||
      !(s.duration_scale > 0.0)) {
    throw ConfigError(
        "sim tolerances, timeouts, joint limit and duration scale must be > 0");
  }
  if (!(s.settle_damping >= 0.0)) {
    throw ConfigError("sim.settle_damping must be >= 0");
  }
}

void validate(const ScenarioScript& script, const RunConfig& cfg) {
  auto fail = [](std::size_t phase, const std::string& what) {
    std::ostringstream msg;
    msg << "scenario phase " << phase << ": " << what;
    throw ConfigError(msg.str());
  };
  if (!std::isfinite(script.initial_equilibrium) ||
      std::abs(script.initial_equilibrium) > cfg.sim.joint_limit) {
    throw ConfigError("scenario initial equilibrium outside the joint limit");
  }
  bool loaded = cfg.load.has_payload();
  for (std::size_t i = 0; i < script.phases.size(); ++i) {
    for (const ScenarioStep& step : script.phases[i].steps) {
      if (const auto* hold = std::get_if<Hold>(&step)) {
        if (!(hold->duration > 0.0)) fail(i, "hold duration must be > 0");
      } else if (const auto* attach = std::get_if<AttachPayload>(&step)) {
        if (loaded) fail(i, "a payload is already attached");
        if (!(attach->mass > 0.0) || !(attach->lever >= 0.0)) {
          fail(i, "payload mass must be > 0 and lever >= 0");
        }
        loaded = true;
      } else if (std::holds_alternative<DetachPayload>(step)) {
        if (!loaded) fail(i, "no payload to detach");
        loaded = false;
      } else if (const auto* change = std::get_if<ChangeEquilibrium>(&step)) {
        if (!std::isfinite(change->target) ||
            std::abs(change->target) > cfg.sim.joint_limit) {
          fail(i, "equilibrium target outside the joint limit");
        }
      } else if (const auto* settle = std::get_if<SettleWait>(&step)) {
        if (!(settle->vel_tol > 0.0)) fail(i, "settle tolerance must be > 0");
      }
    }
  }
}

double static_equilibrium_solve(const ActuatorParams& params,
                                const LoadModel& load, double q_eq,
                                double t) {
  // Net torque on the resting load; decreasing through the root.
  auto net = [&](double q) {
    return spring_torques(q - q_eq, params).on_load +
           external_torque(load, q, t);
  };
  double lo = q_eq - params.max_deflection;
  double hi = q_eq + params.max_deflection;
  double f_lo = net(lo);
  const double f_hi = net(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream msg;
    msg << "no static equilibrium within the deflection range about "
        << q_eq << " rad (load exceeds the spring)";
    throw SimulationFault(FaultKind::kNoStaticEquilibrium, msg.str());
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = net(mid);
    if (std::abs(f_mid) <= kStaticResidualTol &&
        (hi - lo) <= 1e-12 * std::max(1.0, std::abs(mid))) {
      return mid;
    }
    if (mid <= lo || mid >= hi) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double calibrate_payload_lever(const LoadModel& bar, double payload_mass,
                               double holding_torque) {
  const double bar_moment = bar.bar_mass * bar.gravity * bar.bar_com_offset;
  const double c45 = std::cos(std::numbers::pi / 4.0);
  return (holding_torque / c45 - bar_moment) / (payload_mass * bar.gravity);
}

ReferenceExperiment reference_experiment() {
  ReferenceExperiment ref;
  RunConfig& cfg = ref.config;
  cfg.actuator = ActuatorParams::reference();
  cfg.load = LoadModel::centred_bar(kReferenceBarMass, kReferenceBarLength);

  const double lever = calibrate_payload_lever(
      cfg.load, kReferenceLightPayload, kReferenceHoldingTorque);
  const double down = -std::numbers::pi / 4.0;
  const double up = std::numbers::pi / 4.0;
  constexpr double kSettleVel = 1e-6;

  ref.script.initial_equilibrium = down;
  ref.script.phases = {
      {"light payload hold",
       {AttachPayload{kReferenceLightPayload, lever}, SettleWait{kSettleVel},
        Hold{kReferenceHoldDuration}, DetachPayload{}, SettleWait{kSettleVel},
        Hold{1.0}}},
      {"equilibrium change", {ChangeEquilibrium{up}, Hold{1.0}}},
      {"heavy payload hold",
       {AttachPayload{kReferenceHeavyPayload, lever}, SettleWait{kSettleVel},
        Hold{kReferenceHoldDuration}, DetachPayload{}, SettleWait{kSettleVel},
        Hold{1.0}}},
  };
  cfg.supervisor.target = down;
  return ref;
}

namespace {

class Runner {
 public:
  Runner(const ScenarioScript& script, const RunConfig& cfg)
      : script_(script), cfg_(cfg), load_(cfg.load) {
    params_ = with_load_inertia(cfg_.actuator, load_);
    supervisor_ = cfg_.supervisor;
    supervisor_.target = script_.initial_equilibrium;
    supervisor_.trim_kd = 0.0;

    state_.mode = Mode::kParallelElastic;
    state_.q_adjuster = script_.initial_equilibrium * params_.gear_ratio;
    state_.q_main =
        static_equilibrium_solve(params_, load_, script_.initial_equilibrium);

    result_.energy.kinetic_begin = kinetic_energy(state_, params_);
    result_.energy.spring_begin =
        spring_energy(deflection(state_, params_), params_);
  }

  RunResult run() {
    for (std::size_t i = 0; i < script_.phases.size(); ++i) {
      try {
        run_phase(static_cast<int>(i));
      } catch (const SimulationFault& fault) {
        std::ostringstream msg;
        msg << "phase " << i << " (" << script_.phases[i].name
            << "): " << fault.what();
        throw SimulationFault(fault.kind(), msg.str(), static_cast<int>(i));
      }
    }
    if (!script_.phases.empty()) {
      decide();
      emit_record(command_, true);
    }
    finish_phases();

    result_.energy.kinetic_end = kinetic_energy(state_, params_);
    result_.energy.spring_end =
        spring_energy(deflection(state_, params_), params_);
    result_.final_state = state_;
    return std::move(result_);
  }

 private:
  void run_phase(int phase) {
    PhaseSummary summary;
    summary.name = script_.phases[phase].name;
    summary.t_begin = state_.t;
    result_.phases.push_back(summary);
    current_phase_ = phase;

    for (const ScenarioStep& step : script_.phases[phase].steps) {
      std::visit([this](const auto& s) { run_step(s); }, step);
    }
  }

  Segment open_segment(SegmentKind kind) {
    Segment seg;
    seg.phase = current_phase_;
    seg.kind = kind;
    seg.t_begin = state_.t;
    seg.first_record = result_.records.size();
    seg.load = load_;
    seg.params = params_;
    return seg;
  }

  void close_segment(Segment seg) {
    seg.t_end = state_.t;
    seg.end_record = result_.records.size();
    result_.segments.push_back(std::move(seg));
  }

  void run_step(const Hold& hold) {
    Segment seg = open_segment(SegmentKind::kHold);
    supervisor_.trim_kd = 0.0;
    const auto steps = static_cast<long long>(
        std::llround(hold.duration * cfg_.sim.duration_scale / cfg_.sim.dt));
    for (long long k = 0; k < steps; ++k) advance(k == 0);
    close_segment(std::move(seg));
  }

  void run_step(const SettleWait& settle) {
    Segment seg = open_segment(SegmentKind::kSettle);
    supervisor_.trim_kd = cfg_.sim.settle_damping;
    const double t0 = state_.t;
    bool first = true;
    while (!at_rest(settle.vel_tol)) {
      if (state_.t - t0 > cfg_.sim.settle_timeout) {
        std::ostringstream msg;
        msg << "load did not settle within " << cfg_.sim.settle_timeout
            << " s";
        throw SimulationFault(FaultKind::kTimeout, msg.str());
      }
      advance(first);
      first = false;
    }
    supervisor_.trim_kd = 0.0;
    close_segment(std::move(seg));
  }

  void run_step(const ChangeEquilibrium& change) {
    Segment seg = open_segment(SegmentKind::kChange);
    supervisor_.trim_kd = 0.0;
    supervisor_.target = change.target;
    const double t0 = state_.t;
    decide();
    bool first = true;
    while (state_.mode == Mode::kVirtualDirectDrive) {
      if (state_.t - t0 > cfg_.sim.change_timeout) {
        std::ostringstream msg;
        msg << "equilibrium change to " << change.target
            << " rad did not complete within " << cfg_.sim.change_timeout
            << " s";
        throw SimulationFault(FaultKind::kTimeout, msg.str());
      }
      integrate(first);
      first = false;
      if (tick_ == 0) decide();
    }
    result_.phases.back().transition_duration = state_.t - t0;
    close_segment(std::move(seg));
  }

  void run_step(const AttachPayload& attach) {
    Segment seg = open_segment(SegmentKind::kAttach);
    swap_load(load_.with_payload(attach.mass, attach.lever));
    close_segment(std::move(seg));
  }

  void run_step(const DetachPayload&) {
    Segment seg = open_segment(SegmentKind::kDetach);
    swap_load(load_.without_payload());
    close_segment(std::move(seg));
  }

  // Instantaneous load change; angular momentum of the main shaft is kept.
  void swap_load(LoadModel load) {
    const double ke_before = kinetic_energy(state_, params_);
    const double momentum = load_side_inertia(params_) * state_.qd_main;
    load_ = std::move(load);
    params_ = with_load_inertia(cfg_.actuator, load_);
    state_.qd_main = momentum / load_side_inertia(params_);
    result_.energy.event_dissipation +=
        ke_before - kinetic_energy(state_, params_);
    have_command_ = false;
  }

  bool at_rest(double vel_tol) const {
    const double residual =
        spring_torques(deflection(state_, params_), params_).on_load +
        external_torque(load_, state_.q_main, state_.t);
    return std::abs(state_.qd_main) <= vel_tol &&
           std::abs(residual) <= cfg_.sim.settle_torque_tol;
  }

  // Runs the supervisor on the current sample and applies its mode.
  void decide() {
    const SupervisorOutput out = supervisor_step(state_, supervisor_, params_);
    if (out.mode != state_.mode) {
      if (out.mode == Mode::kParallelElastic) {
        const double m = adjuster_side_inertia(params_);
        result_.energy.lock_dissipation +=
            0.5 * m * state_.qd_adjuster * state_.qd_adjuster;
      }
      state_ = mode_transition(state_, out.mode);
    }
    command_ = out.command;
    have_command_ = true;
  }

  MotorCommand current_command() {
    if (!have_command_) decide();
    return command_;
  }

  // One control-rate tick (when due) followed by one integration step.
  void advance(bool segment_start) {
    if (segment_start || tick_ == 0 || !have_command_) decide();
    integrate(segment_start);
  }

  void integrate(bool force_record) {
    const MotorCommand cmd = current_command();
    emit_record(cmd, force_record);

    const ActuatorState prev = state_;
    state_ = integrate_held(prev, cmd, params_, load_, cfg_.sim.dt);
    state_.t = static_cast<double>(sample_ + 1) * cfg_.sim.dt;

    EnergyBalance& e = result_.energy;
    e.work_main += cmd.main * (state_.q_main - prev.q_main);
    e.work_adjuster += cmd.adjuster * (state_.q_adjuster - prev.q_adjuster);
    e.work_external +=
        0.5 * cfg_.sim.dt *
        (external_torque(load_, prev.q_main, prev.t) * prev.qd_main +
         external_torque(load_, state_.q_main, state_.t) * state_.qd_main);

    tick_ = (tick_ + 1) % cfg_.sim.control_decimation;
    ++sample_;
  }

  void emit_record(const MotorCommand& cmd, bool force) {
    const TelemetryRecord rec =
        accumulate(last_, state_, cmd, params_, cfg_.sim.dt);
    last_ = rec;
    update_phase_stats(rec);
    if (force || sample_ % cfg_.sim.telemetry_decimation == 0) {
      result_.records.push_back(rec);
    }
  }

  void update_phase_stats(const TelemetryRecord& rec) {
    if (result_.phases.empty()) return;
    PhaseSummary& s = result_.phases.back();
    s.max_abs_deflection = std::max(s.max_abs_deflection, std::abs(rec.delta_l));
    s.max_abs_spring_torque =
        std::max(s.max_abs_spring_torque, std::abs(rec.tau_spring));
    s.max_abs_tau_main = std::max(s.max_abs_tau_main, std::abs(rec.tau_main_cmd));
    s.max_abs_tau_adjuster =
        std::max(s.max_abs_tau_adjuster, std::abs(rec.tau_adjuster_cmd));
  }

  void finish_phases() {
    const auto& records = result_.records;
    for (std::size_t i = 0; i < result_.phases.size(); ++i) {
      PhaseSummary& s = result_.phases[i];
      const auto in_phase = [&](const Segment& seg) {
        return seg.phase == static_cast<int>(i);
      };
      auto first = std::find_if(result_.segments.begin(),
                                result_.segments.end(), in_phase);
      auto last = std::find_if(result_.segments.rbegin(),
                               result_.segments.rend(), in_phase);
      if (first == result_.segments.end()) continue;
      s.t_begin = first->t_begin;
      s.t_end = last->t_end;

      // Phase energy: running integral at the next phase's first sample (or
      // the closing record) minus the value at this phase's first sample.
      const std::size_t begin = first->first_record;
      const std::size_t end = std::min(last->end_record, records.size() - 1);
      if (begin < records.size()) {
        s.energy_main = records[end].energy_main - records[begin].energy_main;
        s.energy_adjuster =
            records[end].energy_adjuster - records[begin].energy_adjuster;
        s.final_equilibrium = records[end].q_eq;
      }

      double spring = 0.0, gravity = 0.0, cf = 0.0, power = 0.0;
      std::size_t count = 0;
      for (const Segment& seg : result_.segments) {
        if (!in_phase(seg) || seg.kind != SegmentKind::kHold ||
            !seg.load.has_payload() || seg.end_record <= seg.first_record) {
          continue;
        }
        const std::span<const TelemetryRecord> span(
            records.data() + seg.first_record,
            seg.end_record - seg.first_record);
        const std::vector<double> cf_power =
            direct_drive_counterfactual(span, seg.params, seg.load);
        for (std::size_t k = 0; k < span.size(); ++k) {
          spring += std::abs(span[k].tau_spring);
          gravity += std::abs(external_torque(seg.load, span[k].q_main,
                                              span[k].t));
          cf += cf_power[k];
          power += span[k].p_main_elec + span[k].p_adjuster_elec;
          ++count;
        }
      }
      if (count > 0) {
        const double n = static_cast<double>(count);
        s.hold_spring_torque = spring / n;
        s.hold_gravity_torque = gravity / n;
        s.hold_counterfactual_power = cf / n;
        s.hold_power = power / n;
      }
    }
  }

  const ScenarioScript& script_;
  const RunConfig& cfg_;
  LoadModel load_;
  ActuatorParams params_;
  SupervisorConfig supervisor_;
  ActuatorState state_;
  MotorCommand command_;
  bool have_command_ = false;
  int tick_ = 0;
  long long sample_ = 0;
  int current_phase_ = 0;
  std::optional<TelemetryRecord> last_;
  RunResult result_;
};

}  // namespace

RunResult run_scenario(const ScenarioScript& script, const RunConfig& cfg) {
  validate(cfg);
  validate(script, cfg);
  return Runner(script, cfg).run();
}

}  // namespace aepea
