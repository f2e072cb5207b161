// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinkband/mesh.hpp"

#include <cmath>
#include <sstream>

namespace kinkband {

std::string to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::interior: return "interior";
    case BoundaryTag::bottom: return "bottom";
    case BoundaryTag::top: return "top";
    case BoundaryTag::left: return "left";
    case BoundaryTag::right: return "right";
  }
  return "unknown";
}

double Mesh2D::total_area() const {
  double sum = 0.0;
  for (double a : element_area) sum += a;
  return sum;
}

std::vector<int> Mesh2D::nodes_with_tag(BoundaryTag tag) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < tags.size(); ++i)
    if (tags[i] == tag) out.push_back(static_cast<int>(i));
  return out;
}

ElementGeometry element_geometry(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
  const Vec2 e1 = p1 - p0;
  const Vec2 e2 = p2 - p0;
  const double det = e1.x() * e2.y() - e1.y() * e2.x();
  const double scale = std::max(e1.squaredNorm(), e2.squaredNorm());
  if (!(det > 1e-14 * scale)) {
    std::ostringstream msg;
    msg << "degenerate triangle (" << p0.transpose() << "), (" << p1.transpose() << "), ("
        << p2.transpose() << "): signed doubled area " << det;
    throw GeometryError(msg.str());
  }
  ElementGeometry g;
  g.area = 0.5 * det;
  // Rows of the inverse Jacobian are the gradients of lambda_1 and lambda_2.
  g.gradients[1] = Vec2(e2.y(), -e2.x()) / det;
  g.gradients[2] = Vec2(-e1.y(), e1.x()) / det;
  g.gradients[0] = -g.gradients[1] - g.gradients[2];
  return g;
}

ElementGeometry element_geometry(const Mesh2D& mesh, std::size_t e) {
  if (e >= mesh.triangles.size())
    throw std::out_of_range("element index " + std::to_string(e) + " out of range");
  const auto& t = mesh.triangles[e];
  return element_geometry(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]);
}

void classify_boundary(Mesh2D& mesh) {
  const double tol_x = 1e-12 * std::max(1.0, mesh.lx);
  const double tol_y = 1e-12 * std::max(1.0, mesh.ly);
  mesh.tags.assign(mesh.nodes.size(), BoundaryTag::interior);
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    const Vec2& x = mesh.nodes[i];
    if (std::abs(x.y()) <= tol_y)
      mesh.tags[i] = BoundaryTag::bottom;
    else if (std::abs(x.y() - mesh.ly) <= tol_y)
      mesh.tags[i] = BoundaryTag::top;
    else if (std::abs(x.x()) <= tol_x)
      mesh.tags[i] = BoundaryTag::left;
    else if (std::abs(x.x() - mesh.lx) <= tol_x)
      mesh.tags[i] = BoundaryTag::right;
  }
}

Mesh2D build_structured_mesh(double lx, double ly, int nx, int ny) {
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw std::invalid_argument("mesh dimensions must be positive and finite");
  if (nx < 1 || ny < 1) throw std::invalid_argument("mesh subdivisions must be at least 1");

  Mesh2D mesh;
  mesh.lx = lx;
  mesh.ly = ly;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    // Exact end coordinates so that boundary classification is unambiguous.
    const double y = (j == ny) ? ly : ly * j / ny;
    for (int i = 0; i <= nx; ++i) {
      const double x = (i == nx) ? lx : lx * i / nx;
      mesh.nodes.emplace_back(x, y);
    }
  }

  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.triangles.reserve(static_cast<std::size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }

  mesh.element_area.reserve(mesh.triangles.size());
  mesh.basis_gradients.reserve(mesh.triangles.size());
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
    const ElementGeometry g = element_geometry(mesh, e);
    mesh.element_area.push_back(g.area);
    mesh.basis_gradients.push_back(g.gradients);
  }
  classify_boundary(mesh);
  return mesh;
}

const QuadratureRule& edge_midpoint_rule() {
  static const QuadratureRule rule{
      {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}},
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
  };
  return rule;
}

namespace {

bool a1_prescribed(BoundaryTag t) { return t != BoundaryTag::interior; }
bool a2_prescribed(BoundaryTag t) { return t == BoundaryTag::bottom || t == BoundaryTag::top; }

}  // namespace

DofMap::DofMap(const Mesh2D& mesh) : node_count_(mesh.node_count()) {
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    const int n = static_cast<int>(i);
    if (!a1_prescribed(mesh.tags[i])) free_a1_.push_back(n);
    if (!a2_prescribed(mesh.tags[i])) free_a2_.push_back(n);
    free_b_.push_back(n);
  }
}

DofMap DofMap::displacement_only(const Mesh2D& mesh) {
  DofMap map(mesh);
  map.free_b_.clear();
  return map;
}

DofMap DofMap::slip_only(const Mesh2D& mesh) {
  DofMap map(mesh);
  map.free_a1_.clear();
  map.free_a2_.clear();
  return map;
}

Eigen::VectorXd DofMap::pack(const Eigen::VectorXd& a1, const Eigen::VectorXd& a2,
                             const Eigen::VectorXd& b) const {
  if (static_cast<std::size_t>(a1.size()) != node_count_ ||
      static_cast<std::size_t>(a2.size()) != node_count_ ||
      static_cast<std::size_t>(b.size()) != node_count_)
    throw std::invalid_argument("DofMap::pack: nodal array length mismatch");
  Eigen::VectorXd x(static_cast<Eigen::Index>(size()));
  Eigen::Index k = 0;
  for (int i : free_a1_) x[k++] = a1[i];
  for (int i : free_a2_) x[k++] = a2[i];
  for (int i : free_b_) x[k++] = b[i];
  return x;
}

void DofMap::unpack(const Eigen::VectorXd& x, Eigen::VectorXd& a1, Eigen::VectorXd& a2,
                    Eigen::VectorXd& b) const {
  if (static_cast<std::size_t>(x.size()) != size())
    throw std::invalid_argument("DofMap::unpack: flat vector length mismatch");
  if (static_cast<std::size_t>(a1.size()) != node_count_ ||
      static_cast<std::size_t>(a2.size()) != node_count_ ||
      static_cast<std::size_t>(b.size()) != node_count_)
    throw std::invalid_argument("DofMap::unpack: nodal array length mismatch");
  Eigen::Index k = 0;
  for (int i : free_a1_) a1[i] = x[k++];
  for (int i : free_a2_) a2[i] = x[k++];
  for (int i : free_b_) b[i] = x[k++];
}

}  // namespace kinkband
