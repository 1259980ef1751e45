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

#include "aepea/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <system_error>

#include "aepea/errors.hpp"

namespace aepea {

namespace {

// Shortest text that parses back to the same double.
std::string format_value(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ec == std::errc() ? ptr : buf.data());
}

struct NumberKey {
  const char* key;
  double& (*ref)(RunConfig&);
};

// clang-format off
const std::array<NumberKey, 31> kNumberKeys{{
    {"actuator.main_rotor_inertia", [](RunConfig& c) -> double& { return c.actuator.main_rotor_inertia; }},
    {"actuator.load_inertia", [](RunConfig& c) -> double& { return c.actuator.load_inertia; }},
    {"actuator.adjuster_rotor_inertia", [](RunConfig& c) -> double& { return c.actuator.adjuster_rotor_inertia; }},
    {"actuator.worm_inertia", [](RunConfig& c) -> double& { return c.actuator.worm_inertia; }},
    {"actuator.worm_wheel_inertia", [](RunConfig& c) -> double& { return c.actuator.worm_wheel_inertia; }},
    {"actuator.gear_ratio", [](RunConfig& c) -> double& { return c.actuator.gear_ratio; }},
    {"actuator.stiffness", [](RunConfig& c) -> double& { return c.actuator.stiffness; }},
    {"actuator.nulling_rate", [](RunConfig& c) -> double& { return c.actuator.nulling_rate; }},
    {"actuator.main_torque_limit", [](RunConfig& c) -> double& { return c.actuator.main_torque_limit; }},
    {"actuator.adjuster_torque_limit", [](RunConfig& c) -> double& { return c.actuator.adjuster_torque_limit; }},
    {"actuator.main_torque_constant", [](RunConfig& c) -> double& { return c.actuator.main_torque_constant; }},
    {"actuator.adjuster_torque_constant", [](RunConfig& c) -> double& { return c.actuator.adjuster_torque_constant; }},
    {"actuator.supply_voltage", [](RunConfig& c) -> double& { return c.actuator.supply_voltage; }},
    {"actuator.max_deflection", [](RunConfig& c) -> double& { return c.actuator.max_deflection; }},
    {"load.bar_mass", [](RunConfig& c) -> double& { return c.load.bar_mass; }},
    {"load.bar_length", [](RunConfig& c) -> double& { return c.load.bar_length; }},
    {"load.bar_com_offset", [](RunConfig& c) -> double& { return c.load.bar_com_offset; }},
    {"load.gravity", [](RunConfig& c) -> double& { return c.load.gravity; }},
    {"supervisor.pos_tol", [](RunConfig& c) -> double& { return c.supervisor.pos_tol; }},
    {"supervisor.defl_tol", [](RunConfig& c) -> double& { return c.supervisor.defl_tol; }},
    {"supervisor.vel_tol", [](RunConfig& c) -> double& { return c.supervisor.vel_tol; }},
    {"supervisor.arrive_vel_tol", [](RunConfig& c) -> double& { return c.supervisor.arrive_vel_tol; }},
    {"supervisor.kp", [](RunConfig& c) -> double& { return c.supervisor.kp; }},
    {"supervisor.kd", [](RunConfig& c) -> double& { return c.supervisor.kd; }},
    {"sim.dt", [](RunConfig& c) -> double& { return c.sim.dt; }},
    {"sim.settle_damping", [](RunConfig& c) -> double& { return c.sim.settle_damping; }},
    {"sim.settle_torque_tol", [](RunConfig& c) -> double& { return c.sim.settle_torque_tol; }},
    {"sim.settle_timeout", [](RunConfig& c) -> double& { return c.sim.settle_timeout; }},
    {"sim.change_timeout", [](RunConfig& c) -> double& { return c.sim.change_timeout; }},
    {"sim.joint_limit", [](RunConfig& c) -> double& { return c.sim.joint_limit; }},
    {"sim.duration_scale", [](RunConfig& c) -> double& { return c.sim.duration_scale; }},
}};
// clang-format on

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

double to_number(std::string_view text, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(line, "expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

template <typename Int>
Int to_integer(std::string_view text, std::size_t line) {
  Int value{};
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(line, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

TorqueTable to_table(std::string_view text, std::size_t line) {
  std::vector<std::pair<double, double>> knots;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      fail(line, "torque table entries are time:torque pairs");
    }
    knots.emplace_back(to_number(trim(item.substr(0, colon)), line),
                       to_number(trim(item.substr(colon + 1)), line));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  try {
    return TorqueTable(std::move(knots));
  } catch (const ConfigError& e) {
    fail(line, e.what());
  }
}

const char* kind_name(LoadModel::Kind kind) {
  switch (kind) {
    case LoadModel::Kind::kNone: return "none";
    case LoadModel::Kind::kGravityPendulum: return "pendulum";
    case LoadModel::Kind::kScriptedTorque: return "scripted";
  }
  return "none";
}

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(std::string("cannot read ") + what + " '" +
                      path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Splits into lines with comments and surrounding blanks removed.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    line = trim(line.substr(0, line.find('#')));
    if (!line.empty()) fn(line, line_no);
  }
}

}  // namespace

RunConfig parse_run_config(std::string_view text, const RunConfig& base) {
  RunConfig cfg = base;
  std::set<std::string, std::less<>> seen;
  std::optional<TorqueTable> table;

  for_each_line(text, [&](std::string_view line, std::size_t no) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) fail(no, "duplicate key '" + key + "'");

    for (const NumberKey& k : kNumberKeys) {
      if (key == k.key) {
        k.ref(cfg) = to_number(value, no);
        return;
      }
    }
    if (key == "load.kind") {
      if (value == "none") {
        cfg.load.kind = LoadModel::Kind::kNone;
      } else if (value == "pendulum") {
        cfg.load.kind = LoadModel::Kind::kGravityPendulum;
      } else if (value == "scripted") {
        cfg.load.kind = LoadModel::Kind::kScriptedTorque;
      } else {
        fail(no, "load.kind must be none, pendulum or scripted");
      }
    } else if (key == "load.torque_table") {
      table = to_table(value, no);
    } else if (key == "sim.telemetry_decimation") {
      cfg.sim.telemetry_decimation = to_integer<int>(value, no);
    } else if (key == "sim.control_decimation") {
      cfg.sim.control_decimation = to_integer<int>(value, no);
    } else if (key == "sim.seed") {
      cfg.sim.seed = to_integer<std::uint64_t>(value, no);
    } else if (key == "sim.output") {
      cfg.sim.output = std::string(value);
    } else {
      fail(no, "unknown key '" + key + "'");
    }
  });

  if (table) cfg.load.torque_table = std::move(*table);
  if (cfg.load.kind == LoadModel::Kind::kScriptedTorque &&
      cfg.load.torque_table.empty()) {
    throw ConfigError("load.kind = scripted needs load.torque_table");
  }
  validate(cfg);
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path,
                          const RunConfig& base) {
  try {
    return parse_run_config(read_file(path, "config"), base);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_run_config(const RunConfig& cfg) {
  RunConfig copy = cfg;
  std::ostringstream out;
  out << "load.kind = " << kind_name(cfg.load.kind) << '\n';
  for (const NumberKey& k : kNumberKeys) {
    out << k.key << " = " << format_value(k.ref(copy)) << '\n';
  }
  out << "sim.telemetry_decimation = " << cfg.sim.telemetry_decimation << '\n'
      << "sim.control_decimation = " << cfg.sim.control_decimation << '\n'
      << "sim.seed = " << cfg.sim.seed << '\n';
  if (!cfg.sim.output.empty()) out << "sim.output = " << cfg.sim.output << '\n';
  return out.str();
}

ScenarioScript parse_scenario(std::string_view text) {
  ScenarioScript script;
  for_each_line(text, [&](std::string_view line, std::size_t no) {
    const auto space = line.find_first_of(" \t");
    const std::string_view verb = line.substr(0, space);
    std::string_view args =
        space == std::string_view::npos ? std::string_view{}
                                        : trim(line.substr(space + 1));

    auto numbers = [&](std::size_t count) {
      std::vector<double> out;
      while (!args.empty()) {
        const auto sp = args.find_first_of(" \t");
        out.push_back(to_number(args.substr(0, sp), no));
        args = sp == std::string_view::npos ? std::string_view{}
                                            : trim(args.substr(sp + 1));
      }
      if (out.size() != count) {
        fail(no, "'" + std::string(verb) + "' takes " + std::to_string(count) +
                     " number(s)");
      }
      return out;
    };
    auto current = [&]() -> Phase& {
      if (script.phases.empty()) fail(no, "step before the first 'phase'");
      return script.phases.back();
    };

    if (verb == "phase") {
      script.phases.push_back({std::string(args), {}});
    } else if (verb == "initial") {
      script.initial_equilibrium = numbers(1)[0];
    } else if (verb == "hold") {
      current().steps.push_back(Hold{numbers(1)[0]});
    } else if (verb == "attach") {
      const auto v = numbers(2);
      current().steps.push_back(AttachPayload{v[0], v[1]});
    } else if (verb == "detach") {
      numbers(0);
      current().steps.push_back(DetachPayload{});
    } else if (verb == "change") {
      current().steps.push_back(ChangeEquilibrium{numbers(1)[0]});
    } else if (verb == "settle") {
      current().steps.push_back(SettleWait{numbers(1)[0]});
    } else {
      fail(no, "unknown scenario step '" + std::string(verb) + "'");
    }
  });
  return script;
}

ScenarioScript load_scenario(const std::filesystem::path& path) {
  try {
    return parse_scenario(read_file(path, "scenario"));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_scenario(const ScenarioScript& script) {
  std::ostringstream out;
  out << "initial " << format_value(script.initial_equilibrium) << '\n';
  for (const Phase& phase : script.phases) {
    out << "phase " << phase.name << '\n';
    for (const ScenarioStep& step : phase.steps) {
      if (const auto* s = std::get_if<Hold>(&step)) {
        out << "hold " << format_value(s->duration) << '\n';
      } else if (const auto* a = std::get_if<AttachPayload>(&step)) {
        out << "attach " << format_value(a->mass) << ' '
            << format_value(a->lever) << '\n';
      } else if (std::holds_alternative<DetachPayload>(step)) {
        out << "detach\n";
      } else if (const auto* c = std::get_if<ChangeEquilibrium>(&step)) {
        out << "change " << format_value(c->target) << '\n';
      } else if (const auto* w = std::get_if<SettleWait>(&step)) {
        out << "settle " << format_value(w->vel_tol) << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace aepea
