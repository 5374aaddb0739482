#include "pdwg/assembly.hpp"

#include "pdwg/errors.hpp"
#include "pdwg/parallel.hpp"
#include "pdwg/projection.hpp"
#include "pdwg/quadrature.hpp"
#include "pdwg/weak_operators.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

namespace pdwg {

namespace {

using Triplet = Eigen::Triplet<double>;

/// Tag coverage checks shared by the assemblers.
void check_problem_tags(const Mesh& mesh, const ProblemSpec& problem) {
  if (mesh.subdomain_count() > problem.subdomain_count)
    throw ConfigError("mesh uses subdomain ids the problem does not define");
  if (mesh.interface_piece_count() > 0) {
    if (!problem.any_piece && mesh.interface_piece_count() > problem.piece_count)
      throw ConfigError("mesh has interface pieces the problem provides no data for");
    if (!problem.phi || !problem.psi)
      throw ConfigError("mesh has interface edges but the problem carries no jump data");
  }
  if (mesh.boundary_edge_count() > 0 && !problem.g)
    throw ConfigError("problem provides no Dirichlet boundary data");
  if (!problem.a || !problem.f)
    throw ConfigError("problem must define the diffusion coefficient and the source");
}

/// Element stabilizer matrix in the local layout
/// [sigma_0 | traces e0..e2 | fluxes e0..e2].
Eigen::MatrixXd local_stabilizer(const Space& space, int t,
                                 const ProblemSpec& problem, double tau,
                                 QuadratureConfig quad) {
  const Mesh& mesh = space.mesh();
  const DofMap& d = space.dofs();
  const auto& tri = mesh.triangle(t);
  const int sub = tri.subdomain;
  const CellBasis cell = space.cell_basis(t);
  const int nc = d.cell_dim, ntr = d.trace_dim, nf = d.flux_dim;
  const int nloc = space.local_lambda_size();
  const double h = tri.diameter;
  const double w_trace = 1.0 / (h * h * h);
  const double w_flux = 1.0 / h;

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(nloc, nloc);
  Eigen::VectorXd z_trace(nloc), z_flux(nloc);

  for (int le = 0; le < 3; ++le) {
    const int e = tri.edges[le];
    const double sign = tri.edge_sign[le];
    const Vec2 n_T = sign * mesh.edge(e).normal;
    const auto pts = mesh.edge_points(e);
    const QuadRule rule = edge_quadrature(pts[0], pts[1], quad.edge_for(space.k()));
    const EdgeBasis tb = space.trace_basis(e);
    const EdgeBasis fb = space.flux_basis(e);
    const int cb = nc + le * ntr;
    const int cf = nc + 3 * ntr + le * nf;

    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[q];
      const double t01 = rule.params[q];
      const double w = rule.weights[q];
      const double aq = problem.a(sub, x);

      z_trace.setZero();
      z_flux.setZero();
      for (int j = 0; j < nc; ++j) {
        z_trace[j] = cell.value(j, x);                    // sigma_0
        z_flux[j] = aq * cell.gradient(j, x).dot(n_T);    // a grad sigma_0 . n
      }
      const Eigen::VectorXd beta = tb.values(t01);
      const Eigen::VectorXd gamma = fb.values(t01);
      z_trace.segment(cb, ntr) = -beta;                   // - sigma_b
      z_flux.segment(cf, nf) = -sign * gamma;             // - element-side sigma_n
      L.noalias() += (w_trace * w) * z_trace * z_trace.transpose();
      L.noalias() += (w_flux * w) * z_flux * z_flux.transpose();
    }
  }

  if (tau != 0.0) {
    const QuadRule rule = cell_quadrature(mesh.geometry(t), quad.cell_for(space.k()));
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::VectorXd phi = cell.values(rule.points[q]);
      L.block(0, 0, nc, nc).noalias() += (tau * rule.weights[q]) * phi * phi.transpose();
    }
  }
  return L;
}

void scatter_symmetric(const Eigen::MatrixXd& local, const std::vector<int>& dofs,
                       std::vector<Triplet>& out) {
  const int n = static_cast<int>(dofs.size());
  for (int i = 0; i < n; ++i) {
    if (dofs[i] < 0) continue;
    for (int j = 0; j < n; ++j) {
      if (dofs[j] < 0) continue;
      out.emplace_back(dofs[i], dofs[j], local(i, j));
    }
  }
}

} // namespace

Eigen::SparseMatrix<double> assemble_stabilizer(const Space& space,
                                                const ProblemSpec& problem,
                                                double tau, QuadratureConfig quad) {
  check_problem_tags(space.mesh(), problem);
  const int nt = space.mesh().triangle_count();
  std::vector<std::vector<Triplet>> chunks(nt);
  parallel_for(0, nt, [&](int t) {
    const Eigen::MatrixXd L = local_stabilizer(space, t, problem, tau, quad);
    scatter_symmetric(L, space.local_lambda_dofs(t), chunks[t]);
  });
  std::vector<Triplet> triplets;
  for (const auto& c : chunks) triplets.insert(triplets.end(), c.begin(), c.end());
  const int n = space.dofs().n_lambda();
  Eigen::SparseMatrix<double> S(n, n);
  S.setFromTriplets(triplets.begin(), triplets.end());
  return S;
}

double stabilizer_energy(const Space& space, const ProblemSpec& problem,
                         double tau, const WeakFunction& w, QuadratureConfig quad) {
  const int nt = space.mesh().triangle_count();
  std::vector<double> partial(nt, 0.0);
  parallel_for(0, nt, [&](int t) {
    const Eigen::MatrixXd L = local_stabilizer(space, t, problem, tau, quad);
    const Eigen::VectorXd c = local_lambda_coefficients(space, t, w);
    partial[t] = c.dot(L * c);
  });
  double energy = 0.0;
  for (const double p : partial) energy += p;
  return energy;
}

Eigen::SparseMatrix<double> assemble_coupling(const Space& space,
                                              const ProblemSpec& problem,
                                              QuadratureConfig quad) {
  check_problem_tags(space.mesh(), problem);
  const Mesh& mesh = space.mesh();
  const DofMap& d = space.dofs();
  const int nt = mesh.triangle_count();
  std::vector<std::vector<Triplet>> chunks(nt);

  parallel_for(0, nt, [&](int t) {
    const int sub = mesh.triangle(t).subdomain;
    const auto a_here = [&](const Vec2& x) { return problem.a(sub, x); };
    const LocalWeakOperators ops = local_weak_operators(space, t, a_here, quad);

    const CellBasis cell = space.cell_basis(t);
    const CellBasis primal = space.primal_basis(t);
    const int nc = d.cell_dim, np = d.primal_dim;
    const QuadRule rule = cell_quadrature(mesh.geometry(t), quad.cell_for(space.k()));

    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(np, np);
    Eigen::MatrixXd mass_b1 = Eigen::MatrixXd::Zero(np, np);
    Eigen::MatrixXd mass_b2 = Eigen::MatrixXd::Zero(np, np);
    Eigen::MatrixXd mass_c = Eigen::MatrixXd::Zero(np, nc);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2& x = rule.points[q];
      const double w = rule.weights[q];
      const Eigen::VectorXd v = primal.values(x);
      const Eigen::VectorXd phi = cell.values(x);
      const Vec2 bq = problem.b ? problem.b(sub, x) : Vec2::Zero();
      const double cq = problem.c ? problem.c(sub, x) : 0.0;
      mass.noalias() += w * v * v.transpose();
      mass_b1.noalias() += (w * bq.x()) * v * v.transpose();
      mass_b2.noalias() += (w * bq.y()) * v * v.transpose();
      mass_c.noalias() += (w * cq) * v * phi.transpose();
    }

    // b_T(w, lam) = (w, L_w lam)_T - (w, b . G_w lam)_T + (w, c lam_0)_T
    Eigen::MatrixXd B_loc = mass * ops.laplacian;
    B_loc.noalias() -= mass_b1 * ops.gradient_x;
    B_loc.noalias() -= mass_b2 * ops.gradient_y;
    B_loc.block(0, 0, np, nc) += mass_c;

    const std::vector<int> cols = space.local_lambda_dofs(t);
    for (int i = 0; i < np; ++i) {
      const int row = t * np + i;
      for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
        if (cols[j] < 0) continue;
        chunks[t].emplace_back(row, cols[j], B_loc(i, j));
      }
    }
  });

  std::vector<Triplet> triplets;
  for (const auto& c : chunks) triplets.insert(triplets.end(), c.begin(), c.end());
  Eigen::SparseMatrix<double> B(d.n_primal, d.n_lambda());
  B.setFromTriplets(triplets.begin(), triplets.end());
  return B;
}

Eigen::VectorXd assemble_rhs(const Space& space, const ProblemSpec& problem,
                             QuadratureConfig quad) {
  check_problem_tags(space.mesh(), problem);
  const Mesh& mesh = space.mesh();
  const DofMap& d = space.dofs();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d.n_lambda());

  // volume source against the interior component
  parallel_for(0, mesh.triangle_count(), [&](int t) {
    const int sub = mesh.triangle(t).subdomain;
    const CellBasis cell = space.cell_basis(t);
    const QuadRule rule = cell_quadrature(mesh.geometry(t), quad.cell_for(space.k()));
    Eigen::VectorXd local = Eigen::VectorXd::Zero(d.cell_dim);
    for (int q = 0; q < rule.size(); ++q) {
      local.noalias() += rule.weights[q] * problem.f(sub, rule.points[q]) *
                         cell.values(rule.points[q]);
    }
    rhs.segment(d.interior_base(t), d.cell_dim) = local;
  });

  // boundary and interface data against flux and trace components
  parallel_for(0, mesh.edge_count(), [&](int e) {
    const MeshEdge& edge = mesh.edge(e);
    if (edge.kind == EdgeKind::interior) return;
    const auto pts = mesh.edge_points(e);
    const QuadRule rule = edge_quadrature(pts[0], pts[1], quad.edge_for(space.k()));
    const EdgeBasis fb = space.flux_basis(e);

    if (edge.kind == EdgeKind::boundary) {
      const int sub = mesh.triangle(edge.plus_tri).subdomain;
      Eigen::VectorXd local = Eigen::VectorXd::Zero(d.flux_dim);
      for (int q = 0; q < rule.size(); ++q) {
        local.noalias() -= rule.weights[q] * problem.g(sub, rule.points[q]) *
                           fb.values(rule.params[q]);
      }
      rhs.segment(d.flux_base(e), d.flux_dim) = local;
    } else {
      const EdgeBasis tb = space.trace_basis(e);
      Eigen::VectorXd local_n = Eigen::VectorXd::Zero(d.flux_dim);
      Eigen::VectorXd local_b = Eigen::VectorXd::Zero(d.trace_dim);
      for (int q = 0; q < rule.size(); ++q) {
        const Vec2& x = rule.points[q];
        const double w = rule.weights[q];
        local_n.noalias() -= w * problem.phi(edge.piece, x) * fb.values(rule.params[q]);
        local_b.noalias() +=
            w * problem.psi(edge.piece, x, edge.normal) * tb.values(rule.params[q]);
      }
      rhs.segment(d.flux_base(e), d.flux_dim) = local_n;
      rhs.segment(d.trace_base(e), d.trace_dim) = local_b;
    }
  });
  return rhs;
}

SaddleSystem build_system(Eigen::SparseMatrix<double> S,
                          Eigen::SparseMatrix<double> B, Eigen::VectorXd rhs,
                          const DofMap& dofs, double tau) {
  const int nl = dofs.n_lambda();
  const int n = dofs.total();
  if (S.rows() != nl || S.cols() != nl || B.rows() != dofs.n_primal ||
      B.cols() != nl || rhs.size() != nl)
    throw NumericsError("saddle system blocks have inconsistent sizes");

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<size_t>(S.nonZeros()) + 2 * B.nonZeros());
  for (int col = 0; col < S.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(S, col); it; ++it) {
      triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                            it.value());
    }
  }
  for (int col = 0; col < B.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(B, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      triplets.emplace_back(nl + r, c, it.value());
      triplets.emplace_back(c, nl + r, it.value());
    }
  }

  SaddleSystem sys;
  sys.K.resize(n, n);
  sys.K.setFromTriplets(triplets.begin(), triplets.end());
  sys.rhs = Eigen::VectorXd::Zero(n);
  sys.rhs.head(nl) = rhs;
  sys.S = std::move(S);
  sys.B = std::move(B);
  sys.dofs = dofs;
  sys.tau = tau;
  return sys;
}

SaddleSystem assemble_system(const Space& space, const ProblemSpec& problem,
                             double tau, QuadratureConfig quad) {
  return build_system(assemble_stabilizer(space, problem, tau, quad),
                      assemble_coupling(space, problem, quad),
                      assemble_rhs(space, problem, quad), space.dofs(), tau);
}

void dump_matrix(const Eigen::SparseMatrix<double>& M, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  char line[96];
  for (int col = 0; col < M.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, col); it; ++it) {
      std::snprintf(line, sizeof(line), "%ld %ld %.17g\n",
                    static_cast<long>(it.row()), static_cast<long>(it.col()),
                    it.value());
      out << line;
    }
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

} // namespace pdwg
