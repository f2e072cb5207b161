// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KINKBAND_KINEMATICS_HPP
#define KINKBAND_KINEMATICS_HPP

#include <array>

#include <Eigen/Core>
#include <Eigen/LU>

#include "kinkband/mesh.hpp"

namespace kinkband {

using Tensor2 = Eigen::Matrix2d;

/// Single slip system: glide direction s, slip-plane normal m and the
/// structural tensor M = m (x) m.
struct SlipSystem {
  Vec2 s{0.0, 1.0};
  Vec2 m{1.0, 0.0};
  Tensor2 M = (Tensor2() << 1.0, 0.0, 0.0, 0.0).finished();

  /// Validates |s| = |m| = 1 and s.m = 0 (to 1e-12) and builds M.
  /// Throws std::invalid_argument otherwise.
  static SlipSystem from_vectors(const Vec2& s, const Vec2& m);

  /// s (x) m
  Tensor2 dyad() const { return s * m.transpose(); }
};

/// F^p = I + gamma s (x) m
Tensor2 plastic_distortion(double gamma, const SlipSystem& slip);

/// P = (F^p)^{-1} = I - gamma s (x) m, exact because s (x) m is nilpotent.
Tensor2 inverse_plastic(double gamma, const SlipSystem& slip);

/// F^e = grad_y (I - gamma s (x) m)
Tensor2 elastic_strain(const Tensor2& grad_y, double gamma, const SlipSystem& slip);

/// Constant gradient of the P1 interpolant of three nodal values on element e.
Vec2 gradient_of_field(const Mesh2D& mesh, std::size_t e, const std::array<double, 3>& nodal);

/// Deformation gradient of the P1 map with nodal positions (a1, a2) on e.
Tensor2 deformation_gradient(const Mesh2D& mesh, std::size_t e, const Eigen::VectorXd& a1,
                             const Eigen::VectorXd& a2);

}  // namespace kinkband

#endif  // KINKBAND_KINEMATICS_HPP
