// Global assembly of the saddle-point system
//
//   [ S  B^T ] [ lambda ]   [ r ]
//   [ B  0   ] [   u    ] = [ 0 ]
//
// where S is the stabilizer bilinear form on the weak space,
//   s_T(sigma, lam) = h_T^-3 <sigma_0 - sigma_b, lam_0 - lam_b>_dT
//                   + h_T^-1 <a grad sigma_0 . n - sigma_n, a grad lam_0 . n - lam_n>_dT
//                   + tau (sigma_0, lam_0)_T,
// B couples the primal space against the weak operators,
//   b_T(w, lam) = (w, L_w lam - b . G_w lam + c lam_0)_T,
// and the load functional collects the volume source, the Dirichlet data on
// boundary fluxes and the interface jump data:
//   r(sigma) = (f, sigma_0) - <g, sigma_n>_bdry - <phi_m, sigma_n>_Gamma_m
//            + <psi_m, sigma_b>_Gamma_m.
//
// Lambda unknowns come first (interior, trace, flux blocks), primal unknowns
// follow; boundary trace coefficients are eliminated from the system.

#pragma once

#include "pdwg/problems.hpp"
#include "pdwg/weak_space.hpp"

#include <Eigen/Sparse>

#include <string>

namespace pdwg {

struct SaddleSystem {
  Eigen::SparseMatrix<double> K; ///< full symmetric indefinite matrix
  Eigen::VectorXd rhs;           ///< [r; 0]
  Eigen::SparseMatrix<double> S; ///< stabilizer block (n_lambda^2)
  Eigen::SparseMatrix<double> B; ///< coupling block (n_primal x n_lambda)
  DofMap dofs;
  double tau = 1.0;
};

/// Stabilizer matrix on the constrained weak space; symmetric positive
/// definite for tau > 0.
Eigen::SparseMatrix<double> assemble_stabilizer(const Space& space,
                                                const ProblemSpec& problem,
                                                double tau,
                                                QuadratureConfig quad = {});

/// Coupling matrix B with one row block per triangle's P_{k-1} coefficients.
Eigen::SparseMatrix<double> assemble_coupling(const Space& space,
                                              const ProblemSpec& problem,
                                              QuadratureConfig quad = {});

/// Load functional on the lambda unknowns.
Eigen::VectorXd assemble_rhs(const Space& space, const ProblemSpec& problem,
                             QuadratureConfig quad = {});

/// Assembles the blocks into the saddle-point matrix and padded right side.
SaddleSystem build_system(Eigen::SparseMatrix<double> S,
                          Eigen::SparseMatrix<double> B, Eigen::VectorXd rhs,
                          const DofMap& dofs, double tau);

/// Convenience: all of the above in one call.
SaddleSystem assemble_system(const Space& space, const ProblemSpec& problem,
                             double tau = 1.0, QuadratureConfig quad = {});

/// Element-wise stabilizer energy s(w, w), accumulated without the global
/// matrix; used for the energy norm of discrete functions.
double stabilizer_energy(const Space& space, const ProblemSpec& problem,
                         double tau, const WeakFunction& w,
                         QuadratureConfig quad = {});

/// Writes a sparse matrix as "row col value" triplets (one per line).
void dump_matrix(const Eigen::SparseMatrix<double>& M, const std::string& path);

} // namespace pdwg
