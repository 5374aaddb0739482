#include "support/test_support.hpp"

#include <pdwg/assembly.hpp>
#include <pdwg/problems.hpp>
#include <pdwg/quadrature.hpp>
#include <pdwg/solver.hpp>

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

namespace {

using namespace pdwg;

/// Unit square split along the (0,0)-(1,1) diagonal; both triangles have
/// diameter sqrt 2, area 1/2 and perimeter 2 + sqrt 2.
Mesh two_triangle_square() {
  return Mesh::from_data(
      {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), Vec2(1, 1)},
      {{0, 1, 3, 1}, {0, 3, 2, 1}});
}

/// Single-subdomain problem with constant coefficients and zero data.
ProblemSpec plain_problem(double a = 1.0, Vec2 b = Vec2::Zero(), double c = 0.0) {
  ProblemSpec prob;
  prob.name = "plain";
  prob.subdomain_count = 1;
  prob.a = [a](int, const Vec2&) { return a; };
  prob.b = [b](int, const Vec2&) { return b; };
  prob.c = [c](int, const Vec2&) { return c; };
  prob.f = [](int, const Vec2&) { return 0.0; };
  prob.g = [](int, const Vec2&) { return 0.0; };
  return prob;
}

int interior_edge(const Mesh& mesh) {
  for (int e = 0; e < mesh.edge_count(); ++e)
    if (mesh.edge(e).tris[1] >= 0) return e;
  return -1;
}

WeakFunction random_constrained(const Space& space, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  WeakFunction w(space);
  for (Eigen::Index i = 0; i < w.interior().size(); ++i) w.interior()[i] = dist(rng);
  for (Eigen::Index i = 0; i < w.flux().size(); ++i) w.flux()[i] = dist(rng);
  const Mesh& mesh = space.mesh();
  for (int e = 0; e < mesh.edge_count(); ++e) {
    if (mesh.edge(e).tris[1] < 0) continue;
    for (int j = 0; j < space.dofs().trace_dim; ++j)
      w.trace()[e * space.dofs().trace_dim + j] = dist(rng);
  }
  return w;
}

const InterfaceSquare kSquare{0.25, 0.75, 0.25, 0.75};

} // namespace

TEST_SUITE("assembly") {

TEST_CASE("stabilizer energy of a trace concentrated on the diagonal is 1") {
  const Mesh mesh = two_triangle_square();
  const Space space(mesh, 1);
  const ProblemSpec prob = plain_problem();
  const int diag = interior_edge(mesh);
  REQUIRE(diag >= 0);

  // each side contributes h^-3 |e| = (sqrt 2)^-3 sqrt 2 = 1/2
  WeakFunction w(space);
  w.trace()[diag * space.dofs().trace_dim] = 1.0;
  CHECK(stabilizer_energy(space, prob, 1.0, w) ==
        doctest::Approx(1.0).epsilon(1e-13));

  const Eigen::SparseMatrix<double> S = assemble_stabilizer(space, prob, 1.0);
  const Eigen::VectorXd x = lambda_vector(space, w);
  CHECK(x.dot(S * x) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("stabilizer energy of a flux concentrated on the diagonal is 2") {
  const Mesh mesh = two_triangle_square();
  const Space space(mesh, 1);
  const int diag = interior_edge(mesh);

  // each side contributes h^-1 |e| = (sqrt 2)^-1 sqrt 2 = 1, for any a
  for (double a : {1.0, 7.5}) {
    const ProblemSpec prob = plain_problem(a);
    WeakFunction w(space);
    w.flux()[diag * space.dofs().flux_dim] = 1.0;
    CHECK(stabilizer_energy(space, prob, 1.0, w) ==
          doctest::Approx(2.0).epsilon(1e-13));
    const Eigen::SparseMatrix<double> S = assemble_stabilizer(space, prob, 1.0);
    const Eigen::VectorXd x = lambda_vector(space, w);
    CHECK(x.dot(S * x) == doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("stabilizer energy of an interior indicator includes the tau term") {
  const Mesh mesh = two_triangle_square();
  const Space space(mesh, 1);
  const ProblemSpec prob = plain_problem(4.0);

  // h^-3 (2 + sqrt 2) + tau |T| = 1/sqrt 2 + 1/2 + 3/2
  WeakFunction w(space);
  w.interior()[space.dofs().interior_base(0)] = 1.0;
  const double expected = 1.0 / std::sqrt(2.0) + 0.5 + 1.5;
  CHECK(stabilizer_energy(space, prob, 3.0, w) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("tau scales exactly the interior mass term") {
  const Mesh mesh = Mesh::structured(4, kSquare);
  const Space space(mesh, 2);
  const ProblemSpec prob = example_problem(1);
  const WeakFunction w = random_constrained(space, 5);

  double mass = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const QuadRule rule = cell_quadrature(mesh.geometry(t), 2 * space.k());
    for (int q = 0; q < rule.size(); ++q) {
      const double v = w.interior_value(space, t, rule.points[q]);
      mass += rule.weights[q] * v * v;
    }
  }
  const double e2 = stabilizer_energy(space, prob, 2.0, w);
  const double e0 = stabilizer_energy(space, prob, 0.0, w);
  CHECK(e2 - e0 == doctest::Approx(2.0 * mass).epsilon(1e-11));
}

TEST_CASE("matrix and elementwise stabilizer energies agree") {
  const Mesh mesh = Mesh::structured(4, kSquare);
  for (int k : {1, 2}) {
    const Space space(mesh, k);
    const ProblemSpec prob = example_problem(1);
    const WeakFunction w = random_constrained(space, 100 + k);
    const Eigen::VectorXd x = lambda_vector(space, w);
    const Eigen::SparseMatrix<double> S = assemble_stabilizer(space, prob, 1.0);
    const double direct = stabilizer_energy(space, prob, 1.0, w);
    CHECK(x.dot(S * x) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(direct > 0.0);
  }
}

TEST_CASE("coupling rows against a diagonal flux are +-sqrt 2") {
  const Mesh mesh = two_triangle_square();
  const Space space(mesh, 1);
  const ProblemSpec prob = plain_problem();
  const Eigen::SparseMatrix<double> B = assemble_coupling(space, prob);
  REQUIRE(B.rows() == 2);
  const int col = space.dofs().flux_base(interior_edge(mesh));

  // (1, L_w lambda)_T = -<sign sigma_n, 1>_dT = -sign sqrt 2
  const double b0 = B.coeff(0, col);
  const double b1 = B.coeff(1, col);
  CHECK(std::abs(b0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK(b0 == doctest::Approx(-b1).epsilon(1e-13));
}

TEST_CASE("the reaction term adds c (w, lambda_0) to the coupling") {
  const Mesh mesh = two_triangle_square();
  const Space space(mesh, 1);
  const Eigen::SparseMatrix<double> B =
      assemble_coupling(space, plain_problem(1.0, Vec2::Zero(), 5.0));
  // for k = 1 the weak Laplacian of a pure interior function vanishes, so the
  // diagonal block is c (1, 1)_T = 5/2
  for (int t = 0; t < 2; ++t)
    CHECK(B.coeff(t, space.dofs().interior_base(t)) ==
          doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("the convection term couples traces with the expected strength") {
  const Mesh mesh = two_triangle_square();
  const Space space(mesh, 1);
  const Vec2 b(3.0, 1.0);
  const Eigen::SparseMatrix<double> B =
      assemble_coupling(space, plain_problem(1.0, b, 0.0));
  const int col = space.dofs().trace_base(interior_edge(mesh));

  // b_T(1, sigma_b on e) = -(1, b . G_w sigma)_T = -|e| b . n_T, and the
  // outward normals of the two sides are opposite: entries +-(b2 - b1)
  const double b0 = B.coeff(0, col);
  const double b1 = B.coeff(1, col);
  CHECK(std::abs(b0) == doctest::Approx(std::abs(b.y() - b.x())).epsilon(1e-13));
  CHECK(b0 == doctest::Approx(-b1).epsilon(1e-13));
}

TEST_CASE("load vector entries follow the data terms") {
  const Mesh mesh = Mesh::structured(4, kSquare);
  const Space space(mesh, 1);
  const DofMap& dofs = space.dofs();

  ProblemSpec prob = plain_problem();
  prob.subdomain_count = 2;
  prob.piece_count = 4;
  prob.phi = [](int, const Vec2&) { return 0.0; };
  prob.psi = [](int, const Vec2&, const Vec2&) { return 0.0; };

  SUBCASE("solution jump data lands on interface flux entries") {
    prob.phi = [](int, const Vec2&) { return 1.0; };
    const Eigen::VectorXd r = assemble_rhs(space, prob);
    for (int e = 0; e < mesh.edge_count(); ++e) {
      const double expected =
          mesh.edge(e).kind == EdgeKind::interface ? -0.25 : 0.0;
      CHECK(r[dofs.flux_base(e)] == doctest::Approx(expected).epsilon(1e-13));
    }
    CHECK(r.head(dofs.n_interior).norm() == 0.0);
    CHECK(r.segment(dofs.n_interior, dofs.n_trace).norm() == 0.0);
  }

  SUBCASE("flux jump data lands on interface trace entries") {
    prob.psi = [](int, const Vec2&, const Vec2&) { return 1.0; };
    const Eigen::VectorXd r = assemble_rhs(space, prob);
    for (int e = 0; e < mesh.edge_count(); ++e) {
      const int base = dofs.trace_base(e);
      if (base < 0) continue;
      const double expected =
          mesh.edge(e).kind == EdgeKind::interface ? 0.25 : 0.0;
      CHECK(r[base] == doctest::Approx(expected).epsilon(1e-13));
      CHECK(r[base + 1] == doctest::Approx(0.0).epsilon(1e-13));
    }
    CHECK(r.head(dofs.n_interior).norm() == 0.0);
    CHECK(r.tail(dofs.n_flux).norm() == 0.0);
  }

  SUBCASE("boundary data lands on boundary flux entries") {
    prob.g = [](int, const Vec2&) { return 1.0; };
    const Eigen::VectorXd r = assemble_rhs(space, prob);
    for (int e = 0; e < mesh.edge_count(); ++e) {
      const double expected = mesh.edge(e).tris[1] < 0 ? -0.25 : 0.0;
      CHECK(r[dofs.flux_base(e)] == doctest::Approx(expected).epsilon(1e-13));
    }
  }

  SUBCASE("the source integrates against the interior basis") {
    prob.f = [](int, const Vec2&) { return 1.0; };
    const Eigen::VectorXd r = assemble_rhs(space, prob);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      CHECK(r[dofs.interior_base(t)] ==
            doctest::Approx(1.0 / 32.0).epsilon(1e-13));
      CHECK(r[dofs.interior_base(t) + 1] == doctest::Approx(0.0).epsilon(1e-14));
      CHECK(r[dofs.interior_base(t) + 2] == doctest::Approx(0.0).epsilon(1e-14));
    }
    CHECK(r.tail(dofs.n_trace + dofs.n_flux).norm() == 0.0);
  }
}

TEST_CASE("the assembled saddle matrix has the block structure") {
  const Mesh mesh = two_triangle_square();
  const Space space(mesh, 1);
  const ProblemSpec prob = plain_problem(2.0, Vec2(1.0, -1.0), 0.5);
  const SaddleSystem sys = assemble_system(space, prob);
  const int nl = sys.dofs.n_lambda();
  const int np = sys.dofs.n_primal;
  REQUIRE(sys.K.rows() == nl + np);

  const Eigen::MatrixXd K(sys.K);
  CHECK((K - K.transpose()).norm() < 1e-12 * K.norm());
  CHECK((K.topLeftCorner(nl, nl) - Eigen::MatrixXd(sys.S)).norm() == 0.0);
  CHECK((K.bottomLeftCorner(np, nl) - Eigen::MatrixXd(sys.B)).norm() == 0.0);
  CHECK(K.bottomRightCorner(np, np).norm() == 0.0);
  CHECK(sys.rhs.size() == nl + np);
  CHECK(sys.rhs.tail(np).norm() == 0.0);
}

TEST_CASE("assembly is deterministic across worker counts") {
  const Mesh mesh = Mesh::structured(4, kSquare);
  const Space space(mesh, 1);
  const ProblemSpec prob = example_problem(1);

  setenv("PDWG_THREADS", "1", 1);
  const SaddleSystem serial = assemble_system(space, prob);
  const Solution sol_serial = solve(space, serial);
  setenv("PDWG_THREADS", "4", 1);
  const SaddleSystem threaded = assemble_system(space, prob);
  const Solution sol_threaded = solve(space, threaded);
  unsetenv("PDWG_THREADS");

  CHECK((Eigen::MatrixXd(serial.K) - Eigen::MatrixXd(threaded.K)).norm() == 0.0);
  CHECK((serial.rhs - threaded.rhs).norm() == 0.0);
  CHECK((sol_serial.u.coeffs() - sol_threaded.u.coeffs()).norm() == 0.0);
}

} // TEST_SUITE
