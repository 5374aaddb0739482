// Small planar geometry helpers shared by the mesh and the local FE kernels.

#pragma once

#include <Eigen/Dense>

#include <array>

namespace pdwg {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Geometry of a single triangle, detached from any mesh numbering.
struct TriangleGeometry {
  std::array<Vec2, 3> v;

  /// Signed area; positive for counterclockwise vertex order.
  double signed_area() const {
    const Vec2 d1 = v[1] - v[0];
    const Vec2 d2 = v[2] - v[0];
    return 0.5 * (d1.x() * d2.y() - d1.y() * d2.x());
  }

  double area() const { return std::abs(signed_area()); }

  Vec2 centroid() const { return (v[0] + v[1] + v[2]) / 3.0; }

  /// Longest edge length; used as the local mesh size h_T.
  double diameter() const {
    const double a = (v[1] - v[0]).norm();
    const double b = (v[2] - v[1]).norm();
    const double c = (v[0] - v[2]).norm();
    return std::max(a, std::max(b, c));
  }
};

/// Rotation of a vector by +90 degrees (counterclockwise).
inline Vec2 rotate90(const Vec2& t) { return Vec2(-t.y(), t.x()); }

/// Barycentric coordinates of x with respect to the triangle.
inline Eigen::Vector3d barycentric(const TriangleGeometry& tri, const Vec2& x) {
  Eigen::Matrix2d A;
  A.col(0) = tri.v[1] - tri.v[0];
  A.col(1) = tri.v[2] - tri.v[0];
  const Vec2 lam = A.colPivHouseholderQr().solve(x - tri.v[0]);
  return Eigen::Vector3d(1.0 - lam.x() - lam.y(), lam.x(), lam.y());
}

} // namespace pdwg
