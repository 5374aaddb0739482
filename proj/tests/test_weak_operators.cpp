#include "support/test_support.hpp"

#include <pdwg/mesh.hpp>
#include <pdwg/projection.hpp>
#include <pdwg/quadrature.hpp>
#include <pdwg/weak_operators.hpp>
#include <pdwg/weak_space.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

namespace {

using namespace pdwg;
using testing::Poly2;

/// One triangle (0,0), (1,0), (0,1); all its edges are boundary edges and the
/// triangle is the plus side everywhere, so stored fluxes enter with sign +1.
Mesh reference_mesh() {
  return Mesh::from_data({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}, {{0, 1, 2, 1}});
}

/// Local edge index whose midpoint is closest to the given point.
int local_edge_near(const Mesh& mesh, int t, const Vec2& target) {
  int best = 0;
  double best_dist = 1e30;
  for (int le = 0; le < 3; ++le) {
    const auto pts = mesh.edge_points(mesh.triangle(t).edges[le]);
    const double d = (0.5 * (pts[0] + pts[1]) - target).norm();
    if (d < best_dist) {
      best_dist = d;
      best = le;
    }
  }
  return best;
}

constexpr auto kUnitDiffusion = [](const Vec2&) { return 1.0; };

} // namespace

TEST_SUITE("weak_operators") {

TEST_CASE("weak Laplacian of a pure flux function on the reference triangle") {
  const Mesh mesh = reference_mesh();
  const Space space(mesh, 1);
  const Eigen::MatrixXd L = weak_laplacian_local(space, 0, kUnitDiffusion);
  REQUIRE(L.rows() == 1);  // P_0 target
  REQUIRE(L.cols() == 12); // 3 interior + 3x2 trace + 3x1 flux

  // sigma = {0, 0, sigma_n = 1 on every edge}: the defining equation reduces
  // to (L_w sigma, 1) = -<1, 1>_dT = -(2 + sqrt 2), so the P_0 coefficient is
  // -2 (2 + sqrt 2)
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(12);
  coeffs[9] = coeffs[10] = coeffs[11] = 1.0;
  const double expected = -2.0 * (2.0 + std::sqrt(2.0));
  CHECK((L * coeffs)(0) == doctest::Approx(expected).epsilon(1e-13));

  // the diffusion coefficient multiplies only the interior terms, so the
  // value is unchanged for a != 1
  const Eigen::MatrixXd L3 =
      weak_laplacian_local(space, 0, [](const Vec2&) { return 3.0; });
  CHECK((L3 * coeffs)(0) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("weak gradient of a pure trace function on the reference triangle") {
  const Mesh mesh = reference_mesh();
  const Space space(mesh, 1);
  const auto [Gx, Gy] = weak_gradient_local(space, 0);
  REQUIRE(Gx.rows() == 1);
  REQUIRE(Gx.cols() == 12);

  // sigma_b = 1 on the hypotenuse: (G_w sigma, psi) = <1, psi . n>_hyp with
  // n = (1,1)/sqrt 2 and length sqrt 2, so G_w sigma = (2, 2)
  const int hyp = local_edge_near(mesh, 0, Vec2(0.5, 0.5));
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(12);
  coeffs[3 + 2 * hyp] = 1.0; // constant trace basis function of that edge
  CHECK((Gx * coeffs)(0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK((Gy * coeffs)(0) == doctest::Approx(2.0).epsilon(1e-13));

  // sigma_b = 1 on the bottom edge: outward normal (0, -1), G_w sigma = (0, -2)
  const int bottom = local_edge_near(mesh, 0, Vec2(0.5, 0.0));
  coeffs.setZero();
  coeffs[3 + 2 * bottom] = 1.0;
  CHECK((Gx * coeffs)(0) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK((Gy * coeffs)(0) == doctest::Approx(-2.0).epsilon(1e-13));
}

TEST_CASE("constant weak functions have vanishing weak derivatives") {
  // sigma_0 = sigma_b = 1 and sigma_n = 0 represents the constant one; both
  // weak derivatives of a constant must vanish for any diffusion coefficient
  const Mesh mesh = Mesh::structured(3, InterfaceSquare{1.0 / 3, 2.0 / 3, 1.0 / 3, 2.0 / 3});
  for (int k : {1, 2}) {
    const Space space(mesh, k);
    WeakFunction one(space);
    one.interior().setZero();
    one.trace().setZero();
    one.flux().setZero();
    for (int t = 0; t < mesh.triangle_count(); ++t)
      one.interior()[space.dofs().interior_base(t)] = 1.0;
    for (int e = 0; e < mesh.edge_count(); ++e)
      one.trace()[e * space.dofs().trace_dim] = 1.0;

    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const LocalWeakOperators ops = local_weak_operators(
          space, t, [](const Vec2& x) { return 2.0 + x.x(); });
      const Eigen::VectorXd local = local_lambda_coefficients(space, t, one);
      // roundoff-level cancellation, relative to the operator scale
      CHECK((ops.laplacian * local).norm() < 1e-13 * (1.0 + ops.laplacian.norm()));
      CHECK((ops.gradient_x * local).norm() < 1e-13 * (1.0 + ops.gradient_x.norm()));
      CHECK((ops.gradient_y * local).norm() < 1e-13 * (1.0 + ops.gradient_y.norm()));
    }
  }
}

TEST_CASE("weak operators commute with interpolation on polynomials") {
  const Mesh mesh = Mesh::structured(2);
  std::mt19937 rng(41);

  for (int k : {1, 2}) {
    const Space space(mesh, k);
    for (int variant = 0; variant < 2; ++variant) {
      const bool constant_a = variant == 0;
      const auto a_eval = [constant_a](const Vec2& x) {
        return constant_a ? 1.0 : 2.0 + x.x();
      };
      const Poly2 a_poly = constant_a
                               ? Poly2::constant(1.0)
                               : Poly2::constant(2.0) + Poly2::monomial(1, 0);

      for (int trial = 0; trial < 3; ++trial) {
        const Poly2 w = Poly2::random(rng, k + 1);
        const Poly2 wx = w.dx();
        const Poly2 wy = w.dy();
        // L w = -div(a grad w), written out with the product rule
        const Poly2 Lw = (a_poly * wx).dx() * -1.0 + (a_poly * wy).dy() * -1.0;

        const WeakFunction interp = interpolate_weak(
            space, [&](int, const Vec2& x) { return w(x); },
            [&](int, const Vec2& x) { return w.gradient(x); },
            [&](int, const Vec2& x) { return a_eval(x); });

        for (int t = 0; t < mesh.triangle_count(); ++t) {
          const LocalWeakOperators ops = local_weak_operators(space, t, a_eval);
          const Eigen::VectorXd local =
              local_lambda_coefficients(space, t, interp);
          const TriangleGeometry geo = mesh.geometry(t);

          const Eigen::VectorXd lap = ops.laplacian * local;
          const Eigen::VectorXd lap_ref = project_cell(
              [&](const Vec2& x) { return Lw(x); }, k - 1, geo);
          CHECK((lap - lap_ref).norm() < 1e-11 * (1.0 + lap_ref.norm()));

          const Eigen::VectorXd gx = ops.gradient_x * local;
          const Eigen::VectorXd gy = ops.gradient_y * local;
          const Eigen::VectorXd gx_ref =
              project_cell([&](const Vec2& x) { return wx(x); }, k - 1, geo);
          const Eigen::VectorXd gy_ref =
              project_cell([&](const Vec2& x) { return wy(x); }, k - 1, geo);
          CHECK((gx - gx_ref).norm() < 1e-11 * (1.0 + gx_ref.norm()));
          CHECK((gy - gy_ref).norm() < 1e-11 * (1.0 + gy_ref.norm()));
        }
      }
    }
  }
}

TEST_CASE("the combined constructor matches the standalone operators") {
  const Mesh mesh = Mesh::structured(2);
  const Space space(mesh, 2);
  const auto a = [](const Vec2& x) { return 1.0 + x.y(); };
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const LocalWeakOperators ops = local_weak_operators(space, t, a);
    const Eigen::MatrixXd L = weak_laplacian_local(space, t, a);
    const auto [Gx, Gy] = weak_gradient_local(space, t);
    CHECK((ops.laplacian - L).norm() == 0.0);
    CHECK((ops.gradient_x - Gx).norm() == 0.0);
    CHECK((ops.gradient_y - Gy).norm() == 0.0);
  }
}

TEST_CASE("stored flux coefficients enter through the edge sign") {
  // on a two-triangle mesh, a flux concentrated on the shared edge must act
  // with opposite signs on the two sides
  const Mesh mesh = Mesh::from_data(
      {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), Vec2(1, 1)},
      {{0, 1, 3, 1}, {0, 3, 2, 1}});
  const Space space(mesh, 1);

  int shared = -1;
  for (int e = 0; e < mesh.edge_count(); ++e)
    if (mesh.edge(e).tris[1] >= 0) shared = e;
  REQUIRE(shared >= 0);

  WeakFunction w(space);
  w.flux()[space.dofs().flux_base(shared) - space.dofs().n_interior -
           space.dofs().n_trace] = 1.0;

  double values[2] = {0.0, 0.0};
  for (int side = 0; side < 2; ++side) {
    const int t = mesh.edge(shared).tris[side];
    const Eigen::MatrixXd L = weak_laplacian_local(space, t, kUnitDiffusion);
    const Eigen::VectorXd local = local_lambda_coefficients(space, t, w);
    values[side] = (L * local)(0);
  }
  CHECK(values[0] == doctest::Approx(-values[1]).epsilon(1e-13));
  CHECK(std::abs(values[0]) > 0.1);
}

} // TEST_SUITE
