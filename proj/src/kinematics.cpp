// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinkband/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace kinkband {

SlipSystem SlipSystem::from_vectors(const Vec2& s, const Vec2& m) {
  constexpr double tol = 1e-12;
  if (!s.allFinite() || !m.allFinite()) throw std::invalid_argument("slip vectors must be finite");
  if (std::abs(s.norm() - 1.0) > tol) throw std::invalid_argument("slip direction s must be a unit vector");
  if (std::abs(m.norm() - 1.0) > tol) throw std::invalid_argument("slip-plane normal m must be a unit vector");
  if (std::abs(s.dot(m)) > tol) throw std::invalid_argument("slip vectors s and m must be orthogonal");
  SlipSystem slip;
  slip.s = s;
  slip.m = m;
  slip.M = m * m.transpose();
  return slip;
}

Tensor2 plastic_distortion(double gamma, const SlipSystem& slip) {
  return Tensor2::Identity() + gamma * slip.dyad();
}

Tensor2 inverse_plastic(double gamma, const SlipSystem& slip) {
  return Tensor2::Identity() - gamma * slip.dyad();
}

Tensor2 elastic_strain(const Tensor2& grad_y, double gamma, const SlipSystem& slip) {
  // grad_y - gamma (grad_y s) (x) m, avoids forming P
  return grad_y - gamma * (grad_y * slip.s) * slip.m.transpose();
}

Vec2 gradient_of_field(const Mesh2D& mesh, std::size_t e, const std::array<double, 3>& nodal) {
  const auto& g = mesh.basis_gradients.at(e);
  return nodal[0] * g[0] + nodal[1] * g[1] + nodal[2] * g[2];
}

Tensor2 deformation_gradient(const Mesh2D& mesh, std::size_t e, const Eigen::VectorXd& a1,
                             const Eigen::VectorXd& a2) {
  const auto& t = mesh.triangles.at(e);
  const auto& g = mesh.basis_gradients[e];
  Tensor2 F = Tensor2::Zero();
  for (int k = 0; k < 3; ++k) {
    F.row(0) += a1[t[k]] * g[k].transpose();
    F.row(1) += a2[t[k]] * g[k].transpose();
  }
  return F;
}

}  // namespace kinkband
