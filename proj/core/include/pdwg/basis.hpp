// Polynomial bases on cells and edges.
//
// Cell bases are scaled monomials ((x-x_T)/h_T)^p ((y-y_T)/h_T)^q about the
// centroid, ordered degree by degree; the scaling keeps local mass matrices
// well conditioned independently of the mesh size. Edge bases are monomials
// (t - 1/2)^j in the normalized arc-length parameter of the edge, so the two
// elements sharing an edge see the same functions.

#pragma once

#include "pdwg/geometry.hpp"

#include <Eigen/Dense>

#include <vector>

namespace pdwg {

/// Scaled monomial basis of P_degree on a triangle.
class CellBasis {
public:
  CellBasis(const TriangleGeometry& tri, int degree);
  CellBasis(const Vec2& center, double scale, int degree);

  int degree() const { return degree_; }
  /// Dimension of P_degree in two variables: (degree+1)(degree+2)/2.
  int dim() const { return static_cast<int>(powers_.size()); }

  double value(int i, const Vec2& x) const;
  Vec2 gradient(int i, const Vec2& x) const;
  Mat2 hessian(int i, const Vec2& x) const;

  /// All basis values at x as a dense vector.
  Eigen::VectorXd values(const Vec2& x) const;
  /// All basis gradients at x, one column per basis function.
  Eigen::Matrix2Xd gradients(const Vec2& x) const;

  const Vec2& center() const { return center_; }
  double scale() const { return scale_; }

private:
  Vec2 center_;
  double scale_;
  int degree_;
  std::vector<std::array<int, 2>> powers_;
};

/// Monomial basis of P_degree on a segment, in centered arc-length coordinates.
class EdgeBasis {
public:
  EdgeBasis(const Vec2& a, const Vec2& b, int degree);

  int degree() const { return degree_; }
  int dim() const { return degree_ + 1; }

  /// Parameter t in [0,1] of a physical point on the carrier line.
  double param(const Vec2& x) const;

  double value(int i, double t) const;
  Eigen::VectorXd values(double t) const;

  double length() const { return length_; }
  const Vec2& start() const { return a_; }
  const Vec2& end() const { return b_; }

private:
  Vec2 a_, b_;
  double length_;
  int degree_;
};

} // namespace pdwg
