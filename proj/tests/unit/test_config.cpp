// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "kinkband/config.hpp"

namespace kinkband {
namespace {

ConfigError parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return ConfigError("");
}

TEST(ParseConfig, EmptyTextGivesTheReferenceDefaults) {
  const SimulationConfig c = parse_config("");
  EXPECT_EQ(c, SimulationConfig{});
  EXPECT_EQ(c.material.C, 600.0);
  EXPECT_EQ(c.material.D, 200.0);
  EXPECT_EQ(c.material.aniso, 100.0);
  EXPECT_EQ(c.material.beta, 0.02);
  EXPECT_EQ(c.material.eps_grad, 500.0);
  EXPECT_EQ(c.material.sigma, 0.001);
  EXPECT_EQ(c.material.delta, 1e-5);
  EXPECT_EQ(c.material.det_penalty, 1e6);
  EXPECT_EQ(c.horizon, 100.0);
  EXPECT_EQ(c.speed, 0.18);
  EXPECT_EQ(c.steps, 76);
  EXPECT_EQ(c.lx, 42.0);
  EXPECT_EQ(c.ly, 75.0);
}

TEST(ParseConfig, OverridesCommentsAndWhitespace) {
  const SimulationConfig c = parse_config(
      "# a comment\n"
      "\n"
      "load.K = 10\n"
      "   material.C=550   # trailing comment\n"
      "solver.mode = alternating\r\n"
      "output.formats = csv\n"
      "solver.warm_start_plastic = yes\n");
  EXPECT_EQ(c.steps, 10);
  EXPECT_EQ(c.material.C, 550.0);
  EXPECT_EQ(c.mode, SolveMode::alternating);
  EXPECT_TRUE(c.output.write_csv);
  EXPECT_FALSE(c.output.write_vtk);
  EXPECT_TRUE(c.warm_start_plastic);
  SimulationConfig expected;
  expected.steps = 10;
  expected.material.C = 550.0;
  expected.mode = SolveMode::alternating;
  expected.output.write_vtk = false;
  expected.warm_start_plastic = true;
  EXPECT_EQ(c, expected);
}

TEST(ParseConfig, InvariantViolationsNameTheKey) {
  EXPECT_EQ(parse_error("material.C = -1").key(), "material.C");
  EXPECT_EQ(parse_error("load.K = 0").key(), "load.K");
  EXPECT_EQ(parse_error("material.p = 2").key(), "material.p");
  EXPECT_EQ(parse_error("load.speed = 1").key(), "load.speed");  // platen would pass the floor
  EXPECT_EQ(parse_error("mesh.nx = 0").key(), "mesh.nx");
  EXPECT_EQ(parse_error("optimizer.tol_fun = 0").key(), "optimizer.tol_fun");
  EXPECT_NE(std::string(parse_error("material.C = -1").what()).find("material.C"), std::string::npos);
  EXPECT_EQ(parse_error("slip.s2 = 0.5").key(), "slip.s1");
}

TEST(ParseConfig, SyntaxErrorsCarryTheLineNumber) {
  ConfigError e = parse_error("load.K = 5\n\nbogus.key = 1\n");
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(e.key(), "bogus.key");
  EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);

  e = parse_error("mesh.nx = 4\nmesh.ny = six\n");
  EXPECT_EQ(e.line(), 2);
  EXPECT_EQ(e.key(), "mesh.ny");

  EXPECT_EQ(parse_error("just words").line(), 1);
  EXPECT_EQ(parse_error("= 3").line(), 1);
  EXPECT_EQ(parse_error("load.K = 5\nload.K = 6").line(), 2);
  EXPECT_EQ(parse_error("material.C = 1e999").key(), "material.C");
  EXPECT_EQ(parse_error("material.C = 600x").key(), "material.C");
  EXPECT_EQ(parse_error("solver.mode = both").key(), "solver.mode");
  EXPECT_EQ(parse_error("output.formats = png").key(), "output.formats");
  EXPECT_EQ(parse_error("solver.warm_start_plastic = maybe").key(), "solver.warm_start_plastic");
}

TEST(SerializeConfig, ListsEveryKeyOnce) {
  const std::string text = serialize_config(SimulationConfig{});
  for (const std::string& key : config_keys()) {
    const auto at = text.find(key + " = ");
    ASSERT_NE(at, std::string::npos) << key;
    EXPECT_EQ(text.find(key + " = ", at + 1), std::string::npos) << key;
  }
}

TEST(SerializeConfig, RoundTripIsExact) {
  for (const SimulationConfig& c : {SimulationConfig{}, testing::awkward_config()}) {
    const std::string text = serialize_config(c);
    const SimulationConfig back = parse_config(text);
    EXPECT_EQ(back, c);
    EXPECT_EQ(serialize_config(back), text);
  }
}

TEST(ConfigValues, GetAndSetByKey) {
  SimulationConfig c;
  set_config_value(c, "mesh.nx", "12");
  EXPECT_EQ(c.nx, 12);
  EXPECT_EQ(get_config_value(c, "mesh.nx"), "12");
  EXPECT_EQ(get_config_value(c, "material.sigma"), "0.001");
  EXPECT_EQ(get_config_value(c, "optimizer.gradient"), "analytic");
  EXPECT_THROW(set_config_value(c, "nope", "1"), ConfigError);
  EXPECT_THROW(get_config_value(c, "nope"), ConfigError);
}

TEST(ConfigDerived, SettingsFollowTheConfig) {
  SimulationConfig c;
  c.steps = 12;
  c.speed = 0.1;
  c.material.sigma = 0.5;
  c.mode = SolveMode::alternating;
  const EvolutionSettings s = c.evolution_settings();
  EXPECT_EQ(s.grid.steps, 12);
  EXPECT_EQ(s.grid.horizon, 100.0);
  EXPECT_EQ(s.load.speed, 0.1);
  EXPECT_EQ(s.load.ly, 75.0);
  EXPECT_EQ(s.material.sigma, 0.5);
  EXPECT_EQ(s.mode, SolveMode::alternating);
  const Mesh2D m = c.build_mesh();
  EXPECT_EQ(m.nx, 32);
  EXPECT_EQ(m.ny, 57);
}

TEST(LoadConfigFile, MissingFileIsAConfigError) {
  EXPECT_THROW(load_config_file("/nonexistent/kinkband.cfg"), ConfigError);
}

}  // namespace
}  // namespace kinkband
