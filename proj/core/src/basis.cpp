#include "pdwg/basis.hpp"

#include "pdwg/errors.hpp"

#include <cmath>

namespace pdwg {

namespace {

std::vector<std::array<int, 2>> monomial_powers(int degree) {
  std::vector<std::array<int, 2>> powers;
  powers.reserve((degree + 1) * (degree + 2) / 2);
  for (int total = 0; total <= degree; ++total) {
    for (int qy = 0; qy <= total; ++qy) {
      powers.push_back({total - qy, qy});
    }
  }
  return powers;
}

inline double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

} // namespace

CellBasis::CellBasis(const TriangleGeometry& tri, int degree)
    : CellBasis(tri.centroid(), tri.diameter(), degree) {}

CellBasis::CellBasis(const Vec2& center, double scale, int degree)
    : center_(center), scale_(scale), degree_(degree),
      powers_(monomial_powers(degree)) {
  if (degree < 0) throw NumericsError("cell basis degree must be >= 0");
  if (!(scale > 0.0)) throw NumericsError("cell basis scale must be positive");
}

double CellBasis::value(int i, const Vec2& x) const {
  const auto [px, py] = powers_[i];
  const double X = (x.x() - center_.x()) / scale_;
  const double Y = (x.y() - center_.y()) / scale_;
  return ipow(X, px) * ipow(Y, py);
}

Vec2 CellBasis::gradient(int i, const Vec2& x) const {
  const auto [px, py] = powers_[i];
  const double X = (x.x() - center_.x()) / scale_;
  const double Y = (x.y() - center_.y()) / scale_;
  Vec2 g = Vec2::Zero();
  if (px > 0) g.x() = px * ipow(X, px - 1) * ipow(Y, py) / scale_;
  if (py > 0) g.y() = py * ipow(X, px) * ipow(Y, py - 1) / scale_;
  return g;
}

Mat2 CellBasis::hessian(int i, const Vec2& x) const {
  const auto [px, py] = powers_[i];
  const double X = (x.x() - center_.x()) / scale_;
  const double Y = (x.y() - center_.y()) / scale_;
  const double s2 = scale_ * scale_;
  Mat2 h = Mat2::Zero();
  if (px > 1) h(0, 0) = px * (px - 1) * ipow(X, px - 2) * ipow(Y, py) / s2;
  if (py > 1) h(1, 1) = py * (py - 1) * ipow(X, px) * ipow(Y, py - 2) / s2;
  if (px > 0 && py > 0) {
    h(0, 1) = h(1, 0) = px * py * ipow(X, px - 1) * ipow(Y, py - 1) / s2;
  }
  return h;
}

Eigen::VectorXd CellBasis::values(const Vec2& x) const {
  Eigen::VectorXd out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = value(i, x);
  return out;
}

Eigen::Matrix2Xd CellBasis::gradients(const Vec2& x) const {
  Eigen::Matrix2Xd out(2, dim());
  for (int i = 0; i < dim(); ++i) out.col(i) = gradient(i, x);
  return out;
}

EdgeBasis::EdgeBasis(const Vec2& a, const Vec2& b, int degree)
    : a_(a), b_(b), length_((b - a).norm()), degree_(degree) {
  if (degree < 0) throw NumericsError("edge basis degree must be >= 0");
  if (!(length_ > 0.0)) throw NumericsError("edge basis requires distinct endpoints");
}

double EdgeBasis::param(const Vec2& x) const {
  return (x - a_).dot(b_ - a_) / (length_ * length_);
}

double EdgeBasis::value(int i, double t) const {
  double r = 1.0;
  const double xi = t - 0.5;
  for (int j = 0; j < i; ++j) r *= xi;
  return r;
}

Eigen::VectorXd EdgeBasis::values(double t) const {
  Eigen::VectorXd out(dim());
  double r = 1.0;
  const double xi = t - 0.5;
  for (int i = 0; i < dim(); ++i) {
    out[i] = r;
    r *= xi;
  }
  return out;
}

} // namespace pdwg
