// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KINKBAND_MESH_HPP
#define KINKBAND_MESH_HPP

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace kinkband {

using Vec2 = Eigen::Vector2d;

/// Thrown for degenerate (zero or negative area) triangles.
class GeometryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Boundary classification of a node. Corners are resolved with the
/// precedence bottom > top > left/right.
enum class BoundaryTag : std::uint8_t { interior, bottom, top, left, right };

std::string to_string(BoundaryTag tag);

/// Constant P1 geometry of one triangle.
struct ElementGeometry {
  double area = 0.0;
  std::array<Vec2, 3> gradients;  ///< gradients of the barycentric hat functions
};

/// Triangulated rectangle (0, lx) x (0, ly).
///
/// Nodes are numbered row by row, node (i, j) has index j * (nx + 1) + i.
/// Every lattice cell is split along the diagonal from its lower-left to its
/// upper-right corner, giving two counter-clockwise triangles.
struct Mesh2D {
  double lx = 0.0;
  double ly = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryTag> tags;
  std::vector<double> element_area;
  std::vector<std::array<Vec2, 3>> basis_gradients;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t element_count() const { return triangles.size(); }
  double total_area() const;
  /// Nodes carrying a given tag, in increasing index order.
  std::vector<int> nodes_with_tag(BoundaryTag tag) const;
};

/// Structured mesh of nx * ny rectangles, two triangles each. Boundary tags
/// and element geometry are filled in.
Mesh2D build_structured_mesh(double lx, double ly, int nx, int ny);

/// (Re)computes the boundary tags of a lattice mesh in place.
void classify_boundary(Mesh2D& mesh);

/// Area and hat-function gradients of the triangle (p0, p1, p2).
/// Throws GeometryError when the signed area is not positive.
ElementGeometry element_geometry(const Vec2& p0, const Vec2& p1, const Vec2& p2);
ElementGeometry element_geometry(const Mesh2D& mesh, std::size_t e);

/// Area-normalized triangle quadrature in barycentric coordinates.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;  // sum to one
};

/// Three-point edge-midpoint rule, exact for polynomials of degree <= 2.
const QuadratureRule& edge_midpoint_rule();

/// Partition of the nodal coefficients (a1, a2, b) into free and prescribed
/// entries, and the packing of the free ones into a flat vector laid out as
/// [a1 over free_a1 | a2 over free_a2 | b over free_b].
///
/// a1 is prescribed on bottom, top, left and right nodes; a2 on bottom and
/// top nodes; b is free everywhere.
class DofMap {
public:
  DofMap() = default;
  explicit DofMap(const Mesh2D& mesh);

  /// Restricts the packing to a subset of blocks (used by alternating
  /// minimization). Prescribed sets are unchanged.
  static DofMap displacement_only(const Mesh2D& mesh);
  static DofMap slip_only(const Mesh2D& mesh);

  const std::vector<int>& free_a1() const { return free_a1_; }
  const std::vector<int>& free_a2() const { return free_a2_; }
  const std::vector<int>& free_b() const { return free_b_; }
  std::size_t size() const { return free_a1_.size() + free_a2_.size() + free_b_.size(); }
  std::size_t node_count() const { return node_count_; }

  /// Gathers the free entries of nodal arrays into a flat vector.
  Eigen::VectorXd pack(const Eigen::VectorXd& a1, const Eigen::VectorXd& a2,
                       const Eigen::VectorXd& b) const;
  /// Scatters a flat vector into the free entries; prescribed entries keep
  /// their values.
  void unpack(const Eigen::VectorXd& x, Eigen::VectorXd& a1, Eigen::VectorXd& a2,
              Eigen::VectorXd& b) const;

private:
  std::size_t node_count_ = 0;
  std::vector<int> free_a1_;
  std::vector<int> free_a2_;
  std::vector<int> free_b_;
};

}  // namespace kinkband

#endif  // KINKBAND_MESH_HPP
