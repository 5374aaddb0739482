#include <pdwg/assembly.hpp>
#include <pdwg/errors.hpp>
#include <pdwg/problems.hpp>
#include <pdwg/solver.hpp>

#include <doctest.h>

#include <cmath>

namespace {

using namespace pdwg;

ProblemSpec homogeneous_example1() {
  ProblemSpec prob = example_problem(1);
  prob.f = [](int, const Vec2&) { return 0.0; };
  prob.g = [](int, const Vec2&) { return 0.0; };
  prob.phi = [](int, const Vec2&) { return 0.0; };
  prob.psi = [](int, const Vec2&, const Vec2&) { return 0.0; };
  prob.has_exact = false;
  return prob;
}

} // namespace

TEST_SUITE("solver") {

TEST_CASE("homogeneous data yields the exact zero solution") {
  const ProblemSpec prob = homogeneous_example1();
  const Mesh mesh = recipe_mesh(prob);
  const Space space(mesh, 1);
  const SaddleSystem sys = assemble_system(space, prob);
  REQUIRE(sys.rhs.norm() == 0.0);

  const Solution sol = solve(space, sys);
  CHECK(sol.diagnostics.method == "trivial");
  CHECK(sol.u.coeffs().norm() == 0.0);
  CHECK(sol.lambda.interior().norm() == 0.0);
  CHECK(sol.lambda.trace().norm() == 0.0);
  CHECK(sol.lambda.flux().norm() == 0.0);
  CHECK(sol.diagnostics.residual == 0.0);
}

TEST_CASE("dense and sparse paths agree and meet the residual target") {
  const ProblemSpec prob = example_problem(1);
  const Mesh mesh = recipe_mesh(prob);
  const Space space(mesh, 1);
  const SaddleSystem sys = assemble_system(space, prob);

  const Solution dense = solve(space, sys, SolverMethod::dense_lu);
  const Solution sparse = solve(space, sys, SolverMethod::sparse_lu);
  CHECK(dense.diagnostics.method == "dense_lu");
  CHECK(sparse.diagnostics.method == "sparse_lu");
  CHECK(dense.diagnostics.relative_residual <= 1e-10);
  CHECK(sparse.diagnostics.relative_residual <= 1e-10);
  CHECK(dense.diagnostics.residual_floor > 0.0);

  const double scale = dense.u.coeffs().norm();
  CHECK((dense.u.coeffs() - sparse.u.coeffs()).norm() < 1e-9 * scale);
  CHECK((dense.lambda.flux() - sparse.lambda.flux()).norm() <
        1e-9 * (1.0 + dense.lambda.flux().norm()));
}

TEST_CASE("the automatic method switches on the system size") {
  const ProblemSpec prob = example_problem(1);
  const Mesh coarse = recipe_mesh(prob);
  const Space small(coarse, 1); // 264 unknowns
  const Solution sol_small = solve(small, assemble_system(small, prob));
  CHECK(sol_small.diagnostics.method == "dense_lu");

  const Mesh fine = coarse.refined().refined(); // 3808 + 512 unknowns
  const Space large(fine, 1);
  const Solution sol_large = solve(large, assemble_system(large, prob));
  CHECK(sol_large.diagnostics.method == "sparse_lu");
}

TEST_CASE("diagnostics report the system partition") {
  const ProblemSpec prob = example_problem(1);
  const Mesh mesh = recipe_mesh(prob);
  const Space space(mesh, 2);
  const SaddleSystem sys = assemble_system(space, prob);
  const Solution sol = solve(space, sys);
  CHECK(sol.diagnostics.n_lambda == sys.dofs.n_lambda());
  CHECK(sol.diagnostics.n_primal == sys.dofs.n_primal);
  CHECK(sol.diagnostics.rhs_norm == doctest::Approx(sys.rhs.norm()));
  CHECK(sol.diagnostics.refinement_steps >= 0);
  CHECK(std::isfinite(sol.diagnostics.relative_residual));
}

TEST_CASE("a system with an empty row is rejected") {
  const ProblemSpec prob = example_problem(1);
  const Mesh mesh = recipe_mesh(prob);
  const Space space(mesh, 1);
  SaddleSystem sys = assemble_system(space, prob);
  const int victim = 7;
  sys.K.prune([victim](int row, int col, double) {
    return row != victim && col != victim;
  });
  CHECK_THROWS_AS(solve(space, sys), SolverError);
}

TEST_CASE("a mismatched system size is rejected") {
  const ProblemSpec prob = example_problem(1);
  const Mesh mesh = recipe_mesh(prob);
  const Space space(mesh, 1);
  SaddleSystem sys = assemble_system(space, prob);
  sys.rhs.conservativeResize(sys.rhs.size() - 1);
  CHECK_THROWS_AS(solve(space, sys), SolverError);
}

TEST_CASE("non-finite data is reported instead of propagated") {
  const ProblemSpec prob = example_problem(1);
  const Mesh mesh = recipe_mesh(prob);
  const Space space(mesh, 1);
  SaddleSystem sys = assemble_system(space, prob);
  sys.rhs[3] = std::nan("");
  CHECK_THROWS_AS(solve(space, sys), SolverError);
}

} // TEST_SUITE
