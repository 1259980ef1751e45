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

#include "aepea/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

namespace aepea {

namespace {

using Field = double TelemetryRecord::*;

constexpr std::array<Field, 18> kColumns{
    &TelemetryRecord::t,
    &TelemetryRecord::q_main,
    &TelemetryRecord::q_eq,
    &TelemetryRecord::delta_l,
    &TelemetryRecord::qd_main,
    &TelemetryRecord::qd_adjuster,
    &TelemetryRecord::tau_main_cmd,
    &TelemetryRecord::tau_adjuster_cmd,
    &TelemetryRecord::tau_spring,
    &TelemetryRecord::current_main,
    &TelemetryRecord::current_adjuster,
    &TelemetryRecord::p_main_elec,
    &TelemetryRecord::p_adjuster_elec,
    &TelemetryRecord::p_main_mech,
    &TelemetryRecord::p_adjuster_mech,
    &TelemetryRecord::energy_main,
    &TelemetryRecord::energy_adjuster,
    &TelemetryRecord::energy_spring,
};

double parse_double(std::string_view text, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) +
                             ": bad number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                       value, std::chars_format::scientific);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

void write_csv(std::span<const TelemetryRecord> records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const TelemetryRecord& r : records) {
    for (Field f : kColumns) out << format_double(r.*f) << ',';
    out << to_string(r.mode) << '\n';
  }
}

void write_csv(std::span<const TelemetryRecord> records,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() +
                             "' for writing");
  }
  write_csv(records, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::vector<TelemetryRecord> read_csv(std::istream& in) {
  std::vector<TelemetryRecord> records;
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("csv header does not match the telemetry format");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    TelemetryRecord r;
    std::string_view rest(line);
    for (Field f : kColumns) {
      const auto comma = rest.find(',');
      if (comma == std::string_view::npos) {
        throw std::runtime_error("csv line " + std::to_string(line_no) +
                                 ": too few columns");
      }
      r.*f = parse_double(rest.substr(0, comma), line_no);
      rest.remove_prefix(comma + 1);
    }
    if (rest == "PE") {
      r.mode = Mode::kParallelElastic;
    } else if (rest == "VDD") {
      r.mode = Mode::kVirtualDirectDrive;
    } else {
      throw std::runtime_error("csv line " + std::to_string(line_no) +
                               ": unknown mode '" + std::string(rest) + "'");
    }
    records.push_back(r);
  }
  return records;
}

std::vector<TelemetryRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return read_csv(in);
}

}  // namespace aepea
