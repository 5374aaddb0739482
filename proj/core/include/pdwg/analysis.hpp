// Error norms and convergence studies.

#pragma once

#include "pdwg/problems.hpp"
#include "pdwg/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pdwg {

struct ErrorRecord {
  double lambda_w = 0.0;        ///< stabilizer energy norm of lambda
  double lambda0_h1 = 0.0;      ///< broken H1 norm of the interior component
  double lambda0_l2 = 0.0;      ///< L2 norm of the interior component
  std::optional<double> u_l2;   ///< ||u - u_h||_0 when the exact solution is known
};

/// Norms of the discrete solution (the dual variable converges to zero, so
/// its norms are themselves error measures). The primal error integrates the
/// subdomain-correct exact branch on each triangle.
ErrorRecord error_norms(const Space& space, const ProblemSpec& problem,
                        const WeakFunction& lambda, const PrimalFunction& u,
                        double tau, QuadratureConfig quad = {});

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  int n_lambda = 0;
  int n_primal = 0;
  ErrorRecord errors;
  std::optional<double> rate_w, rate_h1, rate_l2, rate_u;
  double seconds = 0.0; ///< assembly + solve wall time (printed, not exported)
};

struct ConvergenceReport {
  std::string problem;
  int k = 1;
  double tau = 1.0;
  std::vector<ConvergenceRow> rows;
};

struct StudyResult {
  ConvergenceReport report;
  Mesh final_mesh;
  Solution final_solution; ///< solution on the finest level (for exports)
};

/// Solves the problem on `levels` uniformly refined meshes starting from
/// `initial`, collecting norms and observed rates log2(e_prev / e).
StudyResult convergence_study(const ProblemSpec& problem, const Mesh& initial,
                              int k, int levels, double tau = 1.0,
                              QuadratureConfig quad = {},
                              SolverMethod method = SolverMethod::automatic);

/// Observed order between two consecutive errors under mesh halving.
std::optional<double> convergence_rate(double coarse_error, double fine_error);

/// CSV rows: level,h,err_lambda_w,rate_w,err_lambda0_h1,rate_h1,
/// err_lambda0_l2,rate_l2,err_u_l2,rate_u. Unknown cells are left empty.
/// Output is byte-deterministic for identical inputs.
void write_csv(const ConvergenceReport& report, const std::string& path);

/// JSON mirror of the CSV schema (same keys per row, null for unknown cells).
void write_json(const ConvergenceReport& report, const std::string& path);

/// Human-readable table: errors to three significant digits, rates to two
/// decimals, with per-level timings.
void print_table(const ConvergenceReport& report, std::ostream& out);

} // namespace pdwg
