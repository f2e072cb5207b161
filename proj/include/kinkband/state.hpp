// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KINKBAND_STATE_HPP
#define KINKBAND_STATE_HPP

#include <Eigen/Core>

#include "kinkband/mesh.hpp"

namespace kinkband {

/// Nodal coefficients of the P1 deformation (a1, a2), in mm, and of the
/// slip field b, at a given time.
struct State {
  Eigen::VectorXd a1;
  Eigen::VectorXd a2;
  Eigen::VectorXd b;
  double time = 0.0;

  /// Undeformed configuration: positions equal reference coordinates, b = 0.
  static State reference(const Mesh2D& mesh);

  std::size_t node_count() const { return static_cast<std::size_t>(a1.size()); }
  bool matches(const Mesh2D& mesh) const;
};

inline State State::reference(const Mesh2D& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.node_count());
  State s;
  s.a1.resize(n);
  s.a2.resize(n);
  s.b = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.a1[i] = mesh.nodes[i].x();
    s.a2[i] = mesh.nodes[i].y();
  }
  return s;
}

inline bool State::matches(const Mesh2D& mesh) const {
  const auto n = static_cast<Eigen::Index>(mesh.node_count());
  return a1.size() == n && a2.size() == n && b.size() == n;
}

}  // namespace kinkband

#endif  // KINKBAND_STATE_HPP
