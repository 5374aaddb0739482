// L2 projections onto cell and edge polynomial spaces.

#pragma once

#include "pdwg/basis.hpp"
#include "pdwg/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>

namespace pdwg {

/// Mass matrix of a cell basis under the given rule.
Eigen::MatrixXd cell_mass_matrix(const CellBasis& basis, const QuadRule& rule);

/// Mass matrix of an edge basis under the given rule.
Eigen::MatrixXd edge_mass_matrix(const EdgeBasis& basis, const QuadRule& rule);

/// Solves M x = rhs for symmetric positive definite M via Cholesky.
/// Raises NumericsError when the factorization fails or the estimated
/// reciprocal condition number falls below 1e-14.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs,
                          const char* context);

/// Coefficients of the L2 projection of f onto P_degree(T).
/// quad_exactness < 0 selects the default 2*degree + 3.
Eigen::VectorXd project_cell(const std::function<double(const Vec2&)>& f,
                             int degree, const TriangleGeometry& tri,
                             int quad_exactness = -1);

/// Coefficients of the L2 projection of f onto P_degree([a,b]).
/// quad_exactness < 0 selects the default 2*degree + 2.
Eigen::VectorXd project_edge(const std::function<double(const Vec2&)>& f,
                             int degree, const Vec2& a, const Vec2& b,
                             int quad_exactness = -1);

} // namespace pdwg
