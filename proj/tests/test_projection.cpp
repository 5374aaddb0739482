#include <pdwg/basis.hpp>
#include <pdwg/errors.hpp>
#include <pdwg/projection.hpp>
#include <pdwg/quadrature.hpp>

#include <doctest.h>

#include <cmath>

namespace {

using namespace pdwg;

const TriangleGeometry kTri{{Vec2(0.0, 0.0), Vec2(1.4, 0.2), Vec2(0.3, 1.1)}};

double eval(const CellBasis& basis, const Eigen::VectorXd& coeffs,
            const Vec2& x) {
  return coeffs.dot(basis.values(x));
}

} // namespace

TEST_SUITE("projection") {

TEST_CASE("cell projection reproduces polynomials of the target degree") {
  const auto f = [](const Vec2& x) {
    return 2.0 - x.x() + 3.0 * x.y() + 0.5 * x.x() * x.y() - x.y() * x.y();
  };
  const Eigen::VectorXd coeffs = project_cell(f, 2, kTri);
  const CellBasis basis(kTri, 2);
  for (const Vec2& x : {Vec2(0.3, 0.2), Vec2(0.9, 0.3), Vec2(0.4, 0.8)})
    CHECK(eval(basis, coeffs, x) == doctest::Approx(f(x)).epsilon(1e-12));
}

TEST_CASE("cell projection is idempotent") {
  const auto f = [](const Vec2& x) { return std::sin(x.x() + 2.0 * x.y()); };
  const Eigen::VectorXd once = project_cell(f, 3, kTri);
  const CellBasis basis(kTri, 3);
  const auto as_function = [&](const Vec2& x) { return eval(basis, once, x); };
  const Eigen::VectorXd twice = project_cell(as_function, 3, kTri);
  CHECK((once - twice).norm() < 1e-12 * (1.0 + once.norm()));
}

TEST_CASE("cell projection residual is orthogonal to the space") {
  const auto f = [](const Vec2& x) { return std::exp(x.x() - x.y()); };
  const int degree = 2;
  const int exactness = 2 * degree + 3;
  const Eigen::VectorXd coeffs = project_cell(f, degree, kTri, exactness);
  const CellBasis basis(kTri, degree);
  const QuadRule rule = cell_quadrature(kTri, exactness);
  for (int i = 0; i < basis.dim(); ++i) {
    double moment = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const double residual = f(rule.points[q]) - eval(basis, coeffs, rule.points[q]);
      moment += rule.weights[q] * residual * basis.value(i, rule.points[q]);
    }
    CHECK(std::abs(moment) < 1e-13);
  }
}

TEST_CASE("edge projection reproduces polynomials and is orthogonal") {
  const Vec2 a(0.2, 0.9), b(1.0, 0.1);
  const auto f = [](const Vec2& x) { return 1.0 + x.x() - 2.0 * x.y(); };
  const Eigen::VectorXd coeffs = project_edge(f, 1, a, b);
  const EdgeBasis basis(a, b, 1);
  for (double t : {0.1, 0.5, 0.9}) {
    const Vec2 p = a + t * (b - a);
    const double value = coeffs[0] * basis.value(0, t) + coeffs[1] * basis.value(1, t);
    CHECK(value == doctest::Approx(f(p)).epsilon(1e-13));
  }
}

TEST_CASE("mass matrices are symmetric positive definite") {
  const CellBasis basis(kTri, 2);
  const QuadRule rule = cell_quadrature(kTri, 4);
  const Eigen::MatrixXd M = cell_mass_matrix(basis, rule);
  CHECK((M - M.transpose()).norm() < 1e-14 * M.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
  // the (0,0) entry is the area since the first basis function is 1
  CHECK(M(0, 0) == doctest::Approx(kTri.area()).epsilon(1e-14));
}

TEST_CASE("solve_spd rejects numerically singular systems") {
  Eigen::MatrixXd M(2, 2);
  M << 1.0, 1.0, 1.0, 1.0 + 1e-16;
  Eigen::VectorXd rhs(2);
  rhs << 1.0, 2.0;
  CHECK_THROWS_AS(solve_spd(M, rhs, "test"), NumericsError);
}

} // TEST_SUITE
