// Direct solution of the assembled saddle-point system.

#pragma once

#include "pdwg/assembly.hpp"
#include "pdwg/weak_space.hpp"

#include <string>

namespace pdwg {

enum class SolverMethod {
  automatic, ///< dense below 2000 unknowns, sparse otherwise
  sparse_lu, ///< sparse LU with column pivoting
  dense_lu,  ///< dense LU with partial pivoting
};

struct SolverDiagnostics {
  int n_lambda = 0;
  int n_primal = 0;
  double residual = 0.0;      ///< ||K x - rhs|| after refinement
  double rhs_norm = 0.0;
  double relative_residual = 0.0;
  /// eps * || |rhs| + |K||x| ||, the smallest residual any double-precision
  /// solution vector can realize for this system; large coefficient contrast
  /// pushes it above 1e-10 * ||rhs|| on some problems
  double residual_floor = 0.0;
  int refinement_steps = 0;
  std::string method;
};

struct Solution {
  WeakFunction lambda;
  PrimalFunction u;
  SolverDiagnostics diagnostics;
};

/// Factorizes and solves the system, applying iterative refinement until the
/// relative residual is at most 1e-10 or the representability floor of the
/// system is reached, whichever is larger; diagnostics report both. Throws
/// SolverError, with the failing pivot index when available, if the matrix is
/// singular or the residual lands above that bound.
Solution solve(const Space& space, const SaddleSystem& system,
               SolverMethod method = SolverMethod::automatic);

} // namespace pdwg
