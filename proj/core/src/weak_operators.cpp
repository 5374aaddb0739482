#include "pdwg/weak_operators.hpp"

#include "pdwg/errors.hpp"
#include "pdwg/projection.hpp"
#include "pdwg/quadrature.hpp"

#include <Eigen/Cholesky>

namespace pdwg {

namespace {

/// Right-hand-side moment matrices of both weak operators, prior to the mass
/// solve. Columns follow the local layout [sigma_0 | traces | fluxes].
struct Moments {
  Eigen::MatrixXd lap, gx, gy, mass;
};

Moments assemble_moments(const Space& space, int t,
                         const std::function<double(const Vec2&)>& a,
                         QuadratureConfig quad) {
  const Mesh& mesh = space.mesh();
  const DofMap& d = space.dofs();
  const CellBasis cell = space.cell_basis(t);
  const CellBasis primal = space.primal_basis(t);
  const int nc = d.cell_dim, np = d.primal_dim, ntr = d.trace_dim, nf = d.flux_dim;
  const int nloc = space.local_lambda_size();

  Moments m;
  m.mass = Eigen::MatrixXd::Zero(np, np);
  m.lap = Eigen::MatrixXd::Zero(np, nloc);
  m.gx = Eigen::MatrixXd::Zero(np, nloc);
  m.gy = Eigen::MatrixXd::Zero(np, nloc);

  const QuadRule cell_rule = cell_quadrature(mesh.geometry(t), quad.cell_for(space.k()));
  for (int q = 0; q < cell_rule.size(); ++q) {
    const Vec2& x = cell_rule.points[q];
    const double w = cell_rule.weights[q];
    const Eigen::VectorXd phi = cell.values(x);
    const Eigen::Matrix2Xd dphi = cell.gradients(x);
    const Eigen::VectorXd v = primal.values(x);
    const Eigen::Matrix2Xd dv = primal.gradients(x);
    m.mass.noalias() += w * v * v.transpose();
    // (a grad sigma_0, grad v)_T
    m.lap.block(0, 0, np, nc).noalias() += (w * a(x)) * dv.transpose() * dphi;
    // -(sigma_0, div psi)_T for psi = (v, 0) and (0, v)
    m.gx.block(0, 0, np, nc).noalias() -= w * dv.row(0).transpose() * phi.transpose();
    m.gy.block(0, 0, np, nc).noalias() -= w * dv.row(1).transpose() * phi.transpose();
  }

  const auto& tri = mesh.triangle(t);
  for (int le = 0; le < 3; ++le) {
    const int e = tri.edges[le];
    const double sign = tri.edge_sign[le];
    const Vec2 n_T = sign * mesh.edge(e).normal; // outward normal of T on e
    const auto pts = mesh.edge_points(e);
    const QuadRule rule = edge_quadrature(pts[0], pts[1], quad.edge_for(space.k()));
    const EdgeBasis tb = space.trace_basis(e);
    const EdgeBasis fb = space.flux_basis(e);
    const int cb = nc + le * ntr;          // first trace column of this edge
    const int cf = nc + 3 * ntr + le * nf; // first flux column of this edge

    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[q];
      const double t01 = rule.params[q];
      const double w = rule.weights[q];
      const Eigen::VectorXd phi = cell.values(x);
      const Eigen::VectorXd v = primal.values(x);
      const Eigen::Matrix2Xd dv = primal.gradients(x);
      const Eigen::VectorXd adv_n = a(x) * (dv.transpose() * n_T);
      const Eigen::VectorXd beta = tb.values(t01);
      const Eigen::VectorXd gamma = fb.values(t01);
      // -<sigma_0 - sigma_b, a grad v . n>_dT
      m.lap.block(0, 0, np, nc).noalias() -= w * adv_n * phi.transpose();
      m.lap.block(0, cb, np, ntr).noalias() += w * adv_n * beta.transpose();
      // -<sigma_n, v>_dT with element-side flux = sign * stored coefficients
      m.lap.block(0, cf, np, nf).noalias() -= (w * sign) * v * gamma.transpose();
      // <sigma_b, psi . n>_dT
      m.gx.block(0, cb, np, ntr).noalias() += (w * n_T.x()) * v * beta.transpose();
      m.gy.block(0, cb, np, ntr).noalias() += (w * n_T.y()) * v * beta.transpose();
    }
  }
  return m;
}

Eigen::LLT<Eigen::MatrixXd> factorize_mass(const Eigen::MatrixXd& mass) {
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14)) {
    throw NumericsError("weak operator mass matrix is singular or ill-conditioned");
  }
  return llt;
}

} // namespace

LocalWeakOperators local_weak_operators(const Space& space, int t,
                                        const std::function<double(const Vec2&)>& a,
                                        QuadratureConfig quad) {
  const Moments m = assemble_moments(space, t, a, quad);
  const auto llt = factorize_mass(m.mass);
  LocalWeakOperators ops;
  ops.laplacian = llt.solve(m.lap);
  ops.gradient_x = llt.solve(m.gx);
  ops.gradient_y = llt.solve(m.gy);
  return ops;
}

Eigen::MatrixXd weak_laplacian_local(const Space& space, int t,
                                     const std::function<double(const Vec2&)>& a,
                                     QuadratureConfig quad) {
  const Moments m = assemble_moments(space, t, a, quad);
  return factorize_mass(m.mass).solve(m.lap);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd>
weak_gradient_local(const Space& space, int t, QuadratureConfig quad) {
  const auto one = [](const Vec2&) { return 1.0; }; // a plays no role here
  const Moments m = assemble_moments(space, t, one, quad);
  const auto llt = factorize_mass(m.mass);
  return {llt.solve(m.gx), llt.solve(m.gy)};
}

Eigen::VectorXd local_lambda_coefficients(const Space& space, int t,
                                          const WeakFunction& w) {
  const DofMap& d = space.dofs();
  const auto& tri = space.mesh().triangle(t);
  Eigen::VectorXd c(space.local_lambda_size());
  c.head(d.cell_dim) = w.interior().segment(t * d.cell_dim, d.cell_dim);
  for (int le = 0; le < 3; ++le) {
    const int e = tri.edges[le];
    c.segment(d.cell_dim + le * d.trace_dim, d.trace_dim) =
        w.trace().segment(e * d.trace_dim, d.trace_dim);
    c.segment(d.cell_dim + 3 * d.trace_dim + le * d.flux_dim, d.flux_dim) =
        w.flux().segment(e * d.flux_dim, d.flux_dim);
  }
  return c;
}

} // namespace pdwg
