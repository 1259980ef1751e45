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

#include "aepea/core_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "aepea/errors.hpp"

namespace aepea {
namespace {

ActuatorParams inertias(double main_rotor, double load, double rotor,
                        double worm, double wheel, double ratio) {
  ActuatorParams p;
  p.main_rotor_inertia = main_rotor;
  p.load_inertia = load;
  p.adjuster_rotor_inertia = rotor;
  p.worm_inertia = worm;
  p.worm_wheel_inertia = wheel;
  p.gear_ratio = ratio;
  return p;
}

TEST(CoreModel, LoadSideInertiaSumsRotorAndLoad) {
  EXPECT_DOUBLE_EQ(load_side_inertia(inertias(0.0, 0.5, 0, 0, 0, 60)), 0.5);
  EXPECT_NEAR(load_side_inertia(inertias(0.01, 1.09, 0, 0, 0, 60)), 1.10,
              1e-12);
  EXPECT_DOUBLE_EQ(load_side_inertia(inertias(0.01, 0.0, 0, 0, 0, 60)), 0.01);
}

TEST(CoreModel, AdjusterInertiaReflectsWormWheel) {
  EXPECT_NEAR(adjuster_side_inertia(inertias(0, 0, 1e-5, 5e-6, 3.6e-3, 60)),
              1.6e-5, 1e-18);
  EXPECT_NEAR(adjuster_side_inertia(inertias(0, 0, 0, 0, 3.6, 60)), 1e-3,
              1e-15);
  EXPECT_NEAR(adjuster_side_inertia(inertias(0, 0, 1e-5, 5e-6, 3.6e-3, 1e6)),
              1.5e-5, 1e-9);
}

TEST(CoreModel, AdjusterInertiaNonIncreasingInRatio) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> inertia(1e-7, 1e-2);
  std::uniform_real_distribution<double> ratio(1.0, 500.0);
  for (int i = 0; i < 500; ++i) {
    const double a = ratio(rng), b = ratio(rng);
    ActuatorParams p = inertias(0, 0, inertia(rng), inertia(rng), inertia(rng),
                                std::min(a, b));
    const double low = adjuster_side_inertia(p);
    p.gear_ratio = std::max(a, b);
    EXPECT_LE(adjuster_side_inertia(p), low);
  }
}

TEST(CoreModel, SpringDeflection) {
  EXPECT_DOUBLE_EQ(spring_deflection(0.5, 30.0, 60.0), 0.0);
  EXPECT_DOUBLE_EQ(spring_deflection(0.7854, 0.0, 60.0), 0.7854);
  EXPECT_DOUBLE_EQ(spring_deflection(0.0, 60.0, 60.0), -1.0);
}

TEST(CoreModel, SpringTorquesMatchHoldingTorques) {
  const ActuatorParams p = ActuatorParams::reference();
  const SpringTorques zero = spring_torques(0.0, p);
  EXPECT_EQ(zero.on_load, 0.0);
  EXPECT_EQ(zero.on_adjuster, 0.0);

  // 4.7 Nm and 12 Nm holding torques back-computed to deflections.
  const SpringTorques light = spring_torques(-0.2238, p);
  EXPECT_NEAR(light.on_load, 4.70, 5e-3);
  EXPECT_NEAR(light.on_adjuster, -0.0783, 5e-5);
  const SpringTorques heavy = spring_torques(-0.5714, p);
  EXPECT_NEAR(heavy.on_load, 12.0, 5e-3);
  EXPECT_NEAR(heavy.on_adjuster, -0.200, 5e-4);
}

TEST(CoreModel, SpringCouplingIsAntisymmetric) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dl(-1.3, 1.3);
  std::uniform_real_distribution<double> n(1.0, 200.0);
  std::uniform_real_distribution<double> k(0.1, 100.0);
  ActuatorParams p;
  for (int i = 0; i < 1000; ++i) {
    p.gear_ratio = n(rng);
    p.stiffness = k(rng);
    const SpringTorques s = spring_torques(dl(rng), p);
    const double scale = std::max(1.0, std::abs(s.on_load));
    EXPECT_NEAR(s.on_load, -p.gear_ratio * s.on_adjuster,
                4 * std::numeric_limits<double>::epsilon() * scale);
  }
}

TEST(CoreModel, EquilibriumPosition) {
  EXPECT_DOUBLE_EQ(equilibrium_position(0.0, 60.0), 0.0);
  EXPECT_NEAR(equilibrium_position(47.12, 60.0), 0.7854, 1e-4);
  EXPECT_NEAR(equilibrium_position(-47.12, 60.0), -0.7854, 1e-4);
  EXPECT_NEAR(equilibrium_position(60.0 * std::numbers::pi / 4.0, 60.0),
              std::numbers::pi / 4.0, 1e-15);
}

TEST(CoreModel, MatchedPositionsAreUndeflected) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> q(-10.0, 10.0);
  std::uniform_real_distribution<double> n(1.0, 200.0);
  for (int i = 0; i < 1000; ++i) {
    const double angle = q(rng), ratio = n(rng);
    EXPECT_NEAR(spring_deflection(angle, ratio * angle, ratio), 0.0,
                1e-14 * std::max(1.0, std::abs(angle)));
    EXPECT_NEAR(equilibrium_position(ratio * angle, ratio), angle,
                1e-14 * std::max(1.0, std::abs(angle)));
  }
}

TEST(CoreModel, SpringEnergy) {
  const ActuatorParams p = ActuatorParams::reference();
  EXPECT_EQ(spring_energy(0.0, p), 0.0);
  EXPECT_NEAR(spring_energy(0.5714, p), 0.5 * 21.0 * 0.5714 * 0.5714, 1e-12);
  EXPECT_NEAR(spring_energy(0.5714, p), 3.4282, 1e-4);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dl(-1.3, 1.3);
  for (int i = 0; i < 500; ++i) {
    const double x = dl(rng);
    EXPECT_EQ(spring_energy(x, p), spring_energy(-x, p));
    if (x != 0.0) EXPECT_GT(spring_energy(x, p), 0.0);
  }
}

TEST(CoreModel, ForceRatio) {
  ActuatorParams p = inertias(0.01, 1.09, 1e-5, 5e-6, 3.6e-3, 60.0);
  DesignCheck check = validate_design(p);
  EXPECT_NEAR(check.force_ratio, 8.727e-4, 1e-7);
  EXPECT_FALSE(check.flagged);
  EXPECT_TRUE(check.warning.empty());

  // Equal inertias with no gearing.
  p = inertias(0.5, 0.5, 1.0, 0.0, 0.0, 1.0);
  check = validate_design(p);
  EXPECT_DOUBLE_EQ(check.force_ratio, 1.0);
  EXPECT_TRUE(check.flagged);
  EXPECT_FALSE(check.warning.empty());

  // Massless adjuster.
  p = inertias(0.5, 0.5, 0.0, 0.0, 0.0, 60.0);
  EXPECT_EQ(validate_design(p).force_ratio, 0.0);
}

TEST(CoreModel, ForceRatioFlagThreshold) {
  ActuatorParams p = inertias(0.5, 0.5, 0.1 / 60.0, 0.0, 0.0, 60.0);
  EXPECT_TRUE(validate_design(p).flagged);
  p.adjuster_rotor_inertia = 0.0999 / 60.0;
  EXPECT_FALSE(validate_design(p).flagged);
}

TEST(CoreModel, ValidateRejectsNonPositiveFields) {
  EXPECT_NO_THROW(validate(ActuatorParams::reference()));

  ActuatorParams p;
  p.stiffness = 0.0;
  EXPECT_THROW(validate(p), ConfigError);
  p = {};
  p.gear_ratio = 0.5;
  EXPECT_THROW(validate(p), ConfigError);
  p = {};
  p.worm_inertia = -1.0;
  EXPECT_THROW(validate(p), ConfigError);
  p = {};
  p.nulling_rate = std::nan("");
  EXPECT_THROW(validate(p), ConfigError);
  p = {};
  p.max_deflection = 0.0;
  try {
    validate(p);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("max_deflection"), std::string::npos);
  }
}

TEST(CoreModel, ReferenceUsesPrototypeConstants) {
  const ActuatorParams p = ActuatorParams::reference();
  EXPECT_EQ(p.stiffness, 21.0);
  EXPECT_EQ(p.gear_ratio, 60.0);
  EXPECT_EQ(p.main_torque_limit, 1.6);
  EXPECT_EQ(p.adjuster_torque_limit, 0.0303);
  EXPECT_NEAR(p.max_deflection, 75.0 * std::numbers::pi / 180.0, 1e-15);
}

TEST(CoreModel, ModeNames) {
  EXPECT_EQ(to_string(Mode::kParallelElastic), "PE");
  EXPECT_EQ(to_string(Mode::kVirtualDirectDrive), "VDD");
}

}  // namespace
}  // namespace aepea
