// Discrete weak differential operators on one element.
//
// For a weak function sigma restricted to a triangle T, the discrete weak
// Laplacian L_w sigma in P_{k-1}(T) is defined by
//   (L_w sigma, w)_T = (a grad sigma_0, grad w)_T
//                      - <sigma_0 - sigma_b, a grad w . n>_dT
//                      - <sigma_n, w>_dT          for all w in P_{k-1}(T),
// and the discrete weak gradient G_w sigma in [P_{k-1}(T)]^2 by
//   (G_w sigma, psi)_T = -(sigma_0, div psi)_T + <sigma_b, psi . n>_dT.
// Both are returned as matrices acting on the element-local coefficient
// vector [sigma_0 | sigma_b(e0..e2) | sigma_n(e0..e2)]; sigma_n columns are
// pre-multiplied by the element's edge signs so that stored (edge-oriented)
// coefficients can be applied directly.

#pragma once

#include "pdwg/weak_space.hpp"

#include <Eigen/Dense>

#include <functional>

namespace pdwg {

/// Weak operators of one triangle, all mapping local coefficients to
/// P_{k-1}(T) coefficient vectors.
struct LocalWeakOperators {
  Eigen::MatrixXd laplacian;
  Eigen::MatrixXd gradient_x;
  Eigen::MatrixXd gradient_y;
};

/// Builds the weak Laplacian and weak gradient of triangle t in one pass;
/// the P_{k-1} mass matrix is factorized once and reused. The diffusion
/// coefficient is evaluated on this element's side of the interface.
LocalWeakOperators local_weak_operators(const Space& space, int t,
                                        const std::function<double(const Vec2&)>& a,
                                        QuadratureConfig quad = {});

/// Weak Laplacian alone (see LocalWeakOperators).
Eigen::MatrixXd weak_laplacian_local(const Space& space, int t,
                                     const std::function<double(const Vec2&)>& a,
                                     QuadratureConfig quad = {});

/// Weak gradient alone; rows of the pair are the x and y component operators.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd>
weak_gradient_local(const Space& space, int t, QuadratureConfig quad = {});

/// Element-local coefficients of a weak function in the operator layout.
Eigen::VectorXd local_lambda_coefficients(const Space& space, int t,
                                          const WeakFunction& w);

} // namespace pdwg
