#include "pdwg/projection.hpp"

#include "pdwg/errors.hpp"

#include <Eigen/Cholesky>

namespace pdwg {

Eigen::MatrixXd cell_mass_matrix(const CellBasis& basis, const QuadRule& rule) {
  const int n = basis.dim();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd phi = basis.values(rule.points[q]);
    M.noalias() += rule.weights[q] * phi * phi.transpose();
  }
  return M;
}

Eigen::MatrixXd edge_mass_matrix(const EdgeBasis& basis, const QuadRule& rule) {
  const int n = basis.dim();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int q = 0; q < rule.size(); ++q) {
    const Eigen::VectorXd phi = basis.values(rule.params[q]);
    M.noalias() += rule.weights[q] * phi * phi.transpose();
  }
  return M;
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs,
                          const char* context) {
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NumericsError(std::string(context) +
                        ": mass matrix is not positive definite");
  }
  const double rcond = llt.rcond();
  if (!(rcond > 1e-14)) {
    throw NumericsError(std::string(context) +
                        ": mass matrix too ill-conditioned (rcond = " +
                        std::to_string(rcond) + ")");
  }
  return llt.solve(rhs);
}

Eigen::VectorXd project_cell(const std::function<double(const Vec2&)>& f,
                             int degree, const TriangleGeometry& tri,
                             int quad_exactness) {
  const int exact = quad_exactness >= 0 ? quad_exactness : 2 * degree + 3;
  const CellBasis basis(tri, degree);
  const QuadRule rule = cell_quadrature(tri, exact);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.dim());
  for (int q = 0; q < rule.size(); ++q) {
    rhs.noalias() +=
        rule.weights[q] * f(rule.points[q]) * basis.values(rule.points[q]);
  }
  return solve_spd(cell_mass_matrix(basis, rule), rhs, "project_cell");
}

Eigen::VectorXd project_edge(const std::function<double(const Vec2&)>& f,
                             int degree, const Vec2& a, const Vec2& b,
                             int quad_exactness) {
  const int exact = quad_exactness >= 0 ? quad_exactness : 2 * degree + 2;
  const EdgeBasis basis(a, b, degree);
  const QuadRule rule = edge_quadrature(a, b, exact);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.dim());
  for (int q = 0; q < rule.size(); ++q) {
    rhs.noalias() +=
        rule.weights[q] * f(rule.points[q]) * basis.values(rule.params[q]);
  }
  return solve_spd(edge_mass_matrix(basis, rule), rhs, "project_edge");
}

} // namespace pdwg
