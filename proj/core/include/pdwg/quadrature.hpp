// Quadrature rules on triangles and edges.
//
// Cell rules use the classic symmetric point sets up to exactness 5 and a
// collapsed-square Gauss product beyond; edge rules are Gauss-Legendre. Rules
// are returned bound to a concrete element: points are physical coordinates
// and the weights sum to |T| (cells) or |e| (edges).

#pragma once

#include "pdwg/geometry.hpp"

#include <vector>

namespace pdwg {

/// Largest cell exactness served before a QuadratureError is raised.
inline constexpr int kMaxCellExactness = 30;
/// Largest edge exactness served before a QuadratureError is raised.
inline constexpr int kMaxEdgeExactness = 31;

/// A quadrature rule bound to one cell or edge.
///
/// For edge rules, params[q] is the curve parameter t in [0,1] of points[q]
/// with respect to the edge orientation the rule was built with.
struct QuadRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  std::vector<double> params;
  int exactness = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Rule integrating polynomials of total degree <= exactness over the triangle.
QuadRule cell_quadrature(const TriangleGeometry& tri, int exactness);

/// Rule integrating polynomials of degree <= exactness along the segment [a, b].
QuadRule edge_quadrature(const Vec2& a, const Vec2& b, int exactness);

} // namespace pdwg
