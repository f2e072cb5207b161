// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

// Deterministic inputs shared by the schema regression tests. Changing any
// value here requires regenerating the files under tests/data.

#ifndef KINKBAND_TESTS_FIXTURES_HPP
#define KINKBAND_TESTS_FIXTURES_HPP

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kinkband/config.hpp"
#include "kinkband/evolution.hpp"
#include "kinkband/mesh.hpp"

namespace kinkband::testing {

inline std::string data_path(const std::string& name) { return std::string(KINKBAND_TEST_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Two records with awkward binary fractions in every field.
inline std::vector<StepRecord> golden_records() {
  std::vector<StepRecord> out(2);
  out[0].k = 0;
  out[0].energy.elastic = 315000.0;
  out[0].energy.hardening = 126.0;
  out[0].energy.total = 315126.0;
  out[0].reaction_force = -151200.0;
  out[0].min_det_fe = 1.0;
  StepRecord& r = out[1];
  r.k = 1;
  r.time = 100.0 / 76.0;
  r.top_displacement = 0.18 * r.time;
  r.energy.elastic = 1.0 / 3.0;
  r.energy.hardening = 0.1;
  r.energy.slip_gradient = 2.5e-9;
  r.energy.penalty = 0.0;
  r.energy.total = r.energy.elastic + r.energy.hardening + r.energy.slip_gradient;
  r.dissipation_increment = 3.15e-5;
  r.cumulative_dissipation = 3.15e-5;
  r.reaction_force = -146766.34375;
  r.max_abs_gamma = std::sqrt(2.0) * 1e-7;
  r.min_det_fe = 0.98765432109876543;
  r.optimizer_iterations = 150;
  return out;
}

/// 1 x 1 mesh of a 2 x 3 rectangle: sheared, compressed and slipped.
inline Mesh2D golden_mesh() { return build_structured_mesh(2.0, 3.0, 1, 1); }

inline State golden_state(const Mesh2D& mesh) {
  State s = State::reference(mesh);
  for (Eigen::Index i = 0; i < s.b.size(); ++i) {
    const double x = mesh.nodes[i].x(), y = mesh.nodes[i].y();
    s.a1[i] = x + 0.1 * y;
    s.a2[i] = 0.9 * y;
    s.b[i] = 0.25 * static_cast<double>(i) - 0.125;
  }
  s.time = 1.5;
  return s;
}

/// A config touching every section with values that need full precision.
inline SimulationConfig awkward_config() {
  SimulationConfig c;
  c.lx = 41.999999999999993;
  c.ly = 75.1;
  c.nx = 7;
  c.ny = 13;
  c.material.C = 600.0 / 7.0;
  c.material.sigma = 1.0 / 3.0 * 1e-3;
  c.material.delta = 1e-17;
  c.material.p = 4.5;
  c.s1 = std::sqrt(0.5);
  c.s2 = std::sqrt(0.5);
  c.m1 = std::sqrt(0.5);
  c.m2 = -std::sqrt(0.5);
  c.speed = 0.1;
  c.horizon = 99.9;
  c.steps = 333;
  c.optimizer.tol_fun = 2.5e-5;
  c.optimizer.gradient_mode = GradientMode::finite_difference;
  c.mode = SolveMode::alternating;
  c.warm_start_plastic = true;
  c.output.directory = "out dir/with spaces";
  c.output.snapshot_stride = 0;
  c.output.write_vtk = false;
  return c;
}

}  // namespace kinkband::testing

#endif  // KINKBAND_TESTS_FIXTURES_HPP
