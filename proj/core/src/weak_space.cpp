#include "pdwg/weak_space.hpp"

#include "pdwg/errors.hpp"
#include "pdwg/parallel.hpp"
#include "pdwg/projection.hpp"
#include "pdwg/quadrature.hpp"

namespace pdwg {

Space::Space(const Mesh& mesh, int k) : mesh_(&mesh), k_(k) {
  if (k < 1) throw ConfigError("polynomial order k must be >= 1");
  dofs_.k = k;
  dofs_.n_triangles = mesh.triangle_count();
  dofs_.n_edges = mesh.edge_count();
  dofs_.cell_dim = (k + 1) * (k + 2) / 2;
  dofs_.trace_dim = k + 1;
  dofs_.flux_dim = k;
  dofs_.primal_dim = k * (k + 1) / 2;
  dofs_.trace_slot.assign(mesh.edge_count(), -1);
  int slot = 0;
  for (int e = 0; e < mesh.edge_count(); ++e) {
    if (mesh.edge(e).kind != EdgeKind::boundary) dofs_.trace_slot[e] = slot++;
  }
  dofs_.n_interior = dofs_.n_triangles * dofs_.cell_dim;
  dofs_.n_trace = slot * dofs_.trace_dim;
  dofs_.n_flux = dofs_.n_edges * dofs_.flux_dim;
  dofs_.n_primal = dofs_.n_triangles * dofs_.primal_dim;
}

CellBasis Space::cell_basis(int t) const {
  return CellBasis(mesh_->geometry(t), k_);
}

CellBasis Space::primal_basis(int t) const {
  return CellBasis(mesh_->geometry(t), k_ - 1);
}

EdgeBasis Space::trace_basis(int e) const {
  const auto pts = mesh_->edge_points(e);
  return EdgeBasis(pts[0], pts[1], k_);
}

EdgeBasis Space::flux_basis(int e) const {
  const auto pts = mesh_->edge_points(e);
  return EdgeBasis(pts[0], pts[1], k_ - 1);
}

int Space::local_lambda_size() const {
  return dofs_.cell_dim + 3 * (dofs_.trace_dim + dofs_.flux_dim);
}

std::vector<int> Space::local_lambda_dofs(int t) const {
  std::vector<int> idx;
  idx.reserve(local_lambda_size());
  for (int i = 0; i < dofs_.cell_dim; ++i) idx.push_back(dofs_.interior_base(t) + i);
  const auto& tri = mesh_->triangle(t);
  for (int le = 0; le < 3; ++le) {
    const int base = dofs_.trace_base(tri.edges[le]);
    for (int i = 0; i < dofs_.trace_dim; ++i) {
      idx.push_back(base < 0 ? -1 : base + i);
    }
  }
  for (int le = 0; le < 3; ++le) {
    const int base = dofs_.flux_base(tri.edges[le]);
    for (int i = 0; i < dofs_.flux_dim; ++i) idx.push_back(base + i);
  }
  return idx;
}

WeakFunction::WeakFunction(const Space& space) {
  const DofMap& d = space.dofs();
  interior_ = Eigen::VectorXd::Zero(d.n_triangles * d.cell_dim);
  trace_ = Eigen::VectorXd::Zero(d.n_edges * d.trace_dim);
  flux_ = Eigen::VectorXd::Zero(d.n_edges * d.flux_dim);
}

double WeakFunction::interior_value(const Space& space, int t, const Vec2& x) const {
  const CellBasis basis = space.cell_basis(t);
  const int base = t * space.dofs().cell_dim;
  double v = 0.0;
  for (int i = 0; i < basis.dim(); ++i) v += interior_[base + i] * basis.value(i, x);
  return v;
}

Vec2 WeakFunction::interior_gradient(const Space& space, int t, const Vec2& x) const {
  const CellBasis basis = space.cell_basis(t);
  const int base = t * space.dofs().cell_dim;
  Vec2 g = Vec2::Zero();
  for (int i = 0; i < basis.dim(); ++i) g += interior_[base + i] * basis.gradient(i, x);
  return g;
}

double WeakFunction::trace_value(const Space& space, int e, double t01) const {
  const EdgeBasis basis = space.trace_basis(e);
  const int base = e * space.dofs().trace_dim;
  double v = 0.0;
  for (int i = 0; i < basis.dim(); ++i) v += trace_[base + i] * basis.value(i, t01);
  return v;
}

double WeakFunction::flux_value(const Space& space, int e, double t01) const {
  const EdgeBasis basis = space.flux_basis(e);
  const int base = e * space.dofs().flux_dim;
  double v = 0.0;
  for (int i = 0; i < basis.dim(); ++i) v += flux_[base + i] * basis.value(i, t01);
  return v;
}

PrimalFunction::PrimalFunction(const Space& space) {
  coeffs_ = Eigen::VectorXd::Zero(space.dofs().n_primal);
}

double PrimalFunction::value(const Space& space, int t, const Vec2& x) const {
  const CellBasis basis = space.primal_basis(t);
  const int base = t * space.dofs().primal_dim;
  double v = 0.0;
  for (int i = 0; i < basis.dim(); ++i) v += coeffs_[base + i] * basis.value(i, x);
  return v;
}

Eigen::VectorXd lambda_vector(const Space& space, const WeakFunction& w) {
  const DofMap& d = space.dofs();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d.n_lambda());
  x.head(d.n_interior) = w.interior();
  for (int e = 0; e < d.n_edges; ++e) {
    const int base = d.trace_base(e);
    if (base >= 0) {
      x.segment(base, d.trace_dim) = w.trace().segment(e * d.trace_dim, d.trace_dim);
    }
  }
  x.segment(d.n_interior + d.n_trace, d.n_flux) = w.flux();
  return x;
}

WeakFunction lambda_from_vector(const Space& space, const Eigen::VectorXd& x) {
  const DofMap& d = space.dofs();
  if (x.size() != d.n_lambda())
    throw NumericsError("lambda vector has the wrong size");
  WeakFunction w(space);
  w.interior() = x.head(d.n_interior);
  for (int e = 0; e < d.n_edges; ++e) {
    const int base = d.trace_base(e);
    if (base >= 0) {
      w.trace().segment(e * d.trace_dim, d.trace_dim) = x.segment(base, d.trace_dim);
    }
  }
  w.flux() = x.segment(d.n_interior + d.n_trace, d.n_flux);
  return w;
}

WeakFunction interpolate_weak(const Space& space, const ScalarField& u,
                              const VectorField& grad_u, const ScalarField& a,
                              QuadratureConfig quad) {
  const Mesh& mesh = space.mesh();
  const DofMap& d = space.dofs();
  const int cell_exact = quad.cell_for(space.k());
  const int edge_exact = quad.edge_for(space.k());
  WeakFunction w(space);

  parallel_for(0, mesh.triangle_count(), [&](int t) {
    const int sub = mesh.triangle(t).subdomain;
    const auto f = [&](const Vec2& x) { return u(sub, x); };
    w.interior().segment(t * d.cell_dim, d.cell_dim) =
        project_cell(f, space.k(), mesh.geometry(t), cell_exact);
  });

  parallel_for(0, mesh.edge_count(), [&](int e) {
    const MeshEdge& edge = mesh.edge(e);
    const int sub = mesh.triangle(edge.plus_tri).subdomain; // plus-side branch
    const auto pts = mesh.edge_points(e);
    const auto trace_f = [&](const Vec2& x) { return u(sub, x); };
    w.trace().segment(e * d.trace_dim, d.trace_dim) =
        project_edge(trace_f, space.k(), pts[0], pts[1], edge_exact);
    const auto flux_f = [&](const Vec2& x) {
      return a(sub, x) * grad_u(sub, x).dot(edge.normal);
    };
    w.flux().segment(e * d.flux_dim, d.flux_dim) =
        project_edge(flux_f, space.k() - 1, pts[0], pts[1], edge_exact);
  });
  return w;
}

PrimalFunction project_primal(const Space& space, const ScalarField& u,
                              QuadratureConfig quad) {
  const Mesh& mesh = space.mesh();
  const DofMap& d = space.dofs();
  const int cell_exact = quad.cell_for(space.k());
  PrimalFunction p(space);
  parallel_for(0, mesh.triangle_count(), [&](int t) {
    const int sub = mesh.triangle(t).subdomain;
    const auto f = [&](const Vec2& x) { return u(sub, x); };
    p.coeffs().segment(t * d.primal_dim, d.primal_dim) =
        project_cell(f, space.k() - 1, mesh.geometry(t), cell_exact);
  });
  return p;
}

} // namespace pdwg
