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

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "aepea/config.hpp"
#include "aepea/csv.hpp"
#include "aepea/errors.hpp"
#include "aepea/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFault = 3;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct RunOptions {
  std::vector<std::string> configs;
  std::string scenario = "reference";
  std::optional<double> dt;
  std::optional<double> duration_scale;
  std::optional<int> decimation;
  std::string out;
};

aepea::RunConfig config_from(const std::string& path) {
  if (path.empty()) return aepea::reference_experiment().config;
  return aepea::load_run_config(path);
}

aepea::ScenarioScript scenario_from(const std::string& name) {
  if (name == "reference") return aepea::reference_experiment().script;
  return aepea::load_scenario(name);
}

std::filesystem::path output_for(const RunOptions& opt,
                                 const aepea::RunConfig& cfg,
                                 const std::string& config_path) {
  std::filesystem::path out = !opt.out.empty()         ? opt.out
                              : !cfg.sim.output.empty() ? cfg.sim.output
                                                        : "telemetry.csv";
  if (opt.configs.size() > 1) {
    const std::string stem = std::filesystem::path(config_path).stem().string();
    out.replace_filename(out.stem().string() + "_" + stem +
                         out.extension().string());
  }
  return out;
}

void print_summary(std::ostream& os, const aepea::RunResult& result,
                   const std::filesystem::path& out) {
  os << "wrote " << result.records.size() << " records to " << out.string()
     << '\n';
  for (std::size_t i = 0; i < result.phases.size(); ++i) {
    const aepea::PhaseSummary& p = result.phases[i];
    os << "phase " << i << " [" << p.name << "] t=" << p.t_begin << ".."
       << p.t_end << " s\n"
       << "  max |dl| " << p.max_abs_deflection << " rad, max |tau_spring| "
       << p.max_abs_spring_torque << " Nm\n"
       << "  max |tau_M| " << p.max_abs_tau_main << " Nm, max |tau_m| "
       << p.max_abs_tau_adjuster << " Nm\n"
       << "  energy main " << p.energy_main << " J, adjuster "
       << p.energy_adjuster << " J\n"
       << "  final equilibrium " << p.final_equilibrium * kRadToDeg << " deg\n";
    if (p.transition_duration) {
      os << "  transition " << *p.transition_duration << " s\n";
    }
    if (p.hold_gravity_torque > 0.0) {
      os << "  hold: spring " << p.hold_spring_torque << " Nm, motors "
         << p.hold_power << " W, springless motor would need "
         << p.hold_counterfactual_power << " W\n";
    }
  }
  const aepea::EnergyBalance& e = result.energy;
  os << "energy balance residual " << e.residual() << " J (locking "
     << e.lock_dissipation << " J, payload events " << e.event_dissipation
     << " J)\n";
}

int run_one(const RunOptions& opt, const std::string& config_path,
            std::ostream& log) {
  aepea::RunConfig cfg = config_from(config_path);
  if (opt.dt) cfg.sim.dt = *opt.dt;
  if (opt.duration_scale) cfg.sim.duration_scale = *opt.duration_scale;
  if (opt.decimation) cfg.sim.telemetry_decimation = *opt.decimation;
  const aepea::ScenarioScript script = scenario_from(opt.scenario);
  if (opt.scenario != "reference") {
    cfg.supervisor.target = script.initial_equilibrium;
  }

  const aepea::RunResult result = aepea::run_scenario(script, cfg);
  const std::filesystem::path out = output_for(opt, cfg, config_path);
  aepea::write_csv(result.records, out);
  print_summary(log, result, out);
  return kExitOk;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const aepea::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const aepea::SimulationFault& e) {
    std::cerr << "simulation fault (" << aepea::to_string(e.kind())
              << "): " << e.what() << '\n';
    return kExitFault;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

int cmd_run(const RunOptions& opt) {
  if (opt.configs.size() <= 1) {
    const std::string path = opt.configs.empty() ? "" : opt.configs.front();
    return guarded([&] { return run_one(opt, path, std::cout); });
  }
  std::vector<int> codes(opt.configs.size(), kExitOk);
  std::vector<std::ostringstream> logs(opt.configs.size());
  {
    std::vector<std::jthread> workers;
    for (std::size_t i = 0; i < opt.configs.size(); ++i) {
      workers.emplace_back([&, i] {
        codes[i] = guarded([&] { return run_one(opt, opt.configs[i], logs[i]); });
      });
    }
  }
  int worst = kExitOk;
  for (std::size_t i = 0; i < opt.configs.size(); ++i) {
    std::cout << "== " << opt.configs[i] << '\n' << logs[i].str();
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

int cmd_validate(const std::string& config_path) {
  return guarded([&] {
    const aepea::RunConfig cfg = config_from(config_path);
    const aepea::ActuatorParams params =
        aepea::with_load_inertia(cfg.actuator, cfg.load);
    const aepea::DesignCheck check = aepea::validate_design(params);
    std::cout << "M_eq " << aepea::load_side_inertia(params) << " kg*m^2\n"
              << "m_eq " << aepea::adjuster_side_inertia(params)
              << " kg*m^2\n"
              << "force ratio n*m_eq/M_eq " << check.force_ratio << '\n';
    if (check.flagged) {
      std::cout << "warning: " << check.warning << '\n';
    } else {
      std::cout << "design ok (ratio < " << aepea::kForceRatioWarnThreshold
                << ")\n";
    }
    return kExitOk;
  });
}

int cmd_oracle(const std::string& config_path, double equilibrium,
               double payload_mass, double payload_lever) {
  return guarded([&] {
    const aepea::RunConfig cfg = config_from(config_path);
    aepea::LoadModel load = cfg.load;
    if (payload_mass > 0.0) load = load.with_payload(payload_mass, payload_lever);
    const double rest = aepea::static_equilibrium_solve(
        aepea::with_load_inertia(cfg.actuator, load), load, equilibrium);
    std::printf("q_eq %.17g rad\nq_M_rest %.17g rad (%.6f deg)\n"
                "spring torque %.17g Nm\n",
                equilibrium, rest, rest * kRadToDeg,
                cfg.actuator.stiffness * (rest - equilibrium));
    return kExitOk;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adjustable-equilibrium parallel elastic actuator simulator"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Run a scenario and write telemetry CSV");
  run->add_option("--config", run_opt.configs,
                  "Config file(s); several run concurrently");
  run->add_option("--scenario", run_opt.scenario,
                  "'reference' or a scenario file")
      ->capture_default_str();
  run->add_option("--dt", run_opt.dt, "Integration step, s");
  run->add_option("--duration-scale", run_opt.duration_scale,
                  "Multiplier on hold durations");
  run->add_option("--decimation", run_opt.decimation,
                  "Telemetry decimation factor");
  run->add_option("--out", run_opt.out, "Output CSV path");

  std::string validate_config;
  auto* validate = app.add_subcommand("validate", "Check the design force ratio");
  validate->add_option("--config", validate_config, "Config file");

  std::string oracle_config;
  double equilibrium = -std::numbers::pi / 4.0;
  double payload_mass = 0.0;
  double payload_lever = 0.0;
  auto* oracle =
      app.add_subcommand("oracle", "Static rest angle for an equilibrium");
  oracle->add_option("--config", oracle_config, "Config file");
  oracle->add_option("--equilibrium", equilibrium, "Equilibrium angle, rad")
      ->capture_default_str();
  oracle->add_option("--payload-mass", payload_mass, "Payload mass, kg");
  oracle->add_option("--payload-lever", payload_lever, "Payload lever, m");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*run) return cmd_run(run_opt);
  if (*validate) return cmd_validate(validate_config);
  return cmd_oracle(oracle_config, equilibrium, payload_mass, payload_lever);
}
