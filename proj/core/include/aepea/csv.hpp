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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aepea/telemetry.hpp"

namespace aepea {

/// Column order is part of the file format.
inline constexpr const char* kCsvHeader =
    "t,q_M,q_eq,delta_l,qd_M,qd_m,tau_M_cmd,tau_m_cmd,tau_spring,I_M,I_m,"
    "p_M_elec,p_m_elec,p_M_mech,p_m_mech,E_M,E_m,E_spring,mode";

/// Shortest round-trip scientific notation.
std::string format_double(double value);

void write_csv(std::span<const TelemetryRecord> records, std::ostream& out);

/// Throws std::runtime_error naming the path when it cannot be written.
void write_csv(std::span<const TelemetryRecord> records,
               const std::filesystem::path& path);

std::vector<TelemetryRecord> read_csv(std::istream& in);
std::vector<TelemetryRecord> read_csv(const std::filesystem::path& path);

}  // namespace aepea
