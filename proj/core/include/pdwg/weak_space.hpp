// Weak function spaces and their degree-of-freedom layout.
//
// A weak function of order k on a mesh is a triple
//   sigma = { sigma_0 in P_k(T) per triangle,
//             sigma_b in P_k(e)  per edge (single-valued),
//             sigma_n in P_{k-1}(e) per edge (single-valued flux) }.
// The flux component is stored once per edge with respect to the edge's fixed
// normal; the value seen by a triangle is edge_sign * stored value, which
// makes the two traces from neighbouring elements equal and opposite by
// construction. The solver subspace constrains sigma_b to zero on boundary
// edges: those coefficients exist in storage but receive no global index.
//
// The primal space pairs each triangle with P_{k-1}(T).

#pragma once

#include "pdwg/basis.hpp"
#include "pdwg/mesh.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace pdwg {

/// Scalar field with one smooth branch per subdomain (or interface piece).
using ScalarField = std::function<double(int, const Vec2&)>;
/// Vector field with one smooth branch per subdomain.
using VectorField = std::function<Vec2(int, const Vec2&)>;

/// Quadrature exactness overrides; negative entries select the defaults
/// 2k+3 on cells and 2k+2 on edges.
struct QuadratureConfig {
  int cell = -1;
  int edge = -1;

  int cell_for(int k) const { return cell >= 0 ? cell : 2 * k + 3; }
  int edge_for(int k) const { return edge >= 0 ? edge : 2 * k + 2; }
};

/// Global index layout. Lambda unknowns come first, grouped into the interior
/// block, the trace block (interior and interface edges only) and the flux
/// block; the primal unknowns follow.
struct DofMap {
  int k = 1;
  int n_triangles = 0;
  int n_edges = 0;
  int cell_dim = 0;    ///< dim P_k(T)
  int trace_dim = 0;   ///< dim P_k(e) = k+1
  int flux_dim = 0;    ///< dim P_{k-1}(e) = k
  int primal_dim = 0;  ///< dim P_{k-1}(T)
  int n_interior = 0;  ///< size of the interior block
  int n_trace = 0;     ///< size of the trace block
  int n_flux = 0;      ///< size of the flux block
  int n_primal = 0;    ///< size of the primal block
  std::vector<int> trace_slot; ///< per edge: slot among non-boundary edges, -1 on boundary

  int interior_base(int t) const { return t * cell_dim; }
  /// First global index of the trace block of edge e, or -1 on the boundary.
  int trace_base(int e) const {
    return trace_slot[e] < 0 ? -1 : n_interior + trace_slot[e] * trace_dim;
  }
  int flux_base(int e) const { return n_interior + n_trace + e * flux_dim; }
  int n_lambda() const { return n_interior + n_trace + n_flux; }
  /// First global index of the primal coefficients of triangle t
  /// (within the full saddle system, i.e. offset by n_lambda()).
  int primal_base(int t) const { return n_lambda() + t * primal_dim; }
  int total() const { return n_lambda() + n_primal; }
};

/// Discretization context binding a mesh to a polynomial order k >= 1.
class Space {
public:
  Space(const Mesh& mesh, int k);

  const Mesh& mesh() const { return *mesh_; }
  int k() const { return k_; }
  const DofMap& dofs() const { return dofs_; }

  CellBasis cell_basis(int t) const;   ///< P_k basis of triangle t
  CellBasis primal_basis(int t) const; ///< P_{k-1} basis of triangle t
  EdgeBasis trace_basis(int e) const;  ///< P_k basis of edge e
  EdgeBasis flux_basis(int e) const;   ///< P_{k-1} basis of edge e

  /// Number of lambda coefficients local to one triangle:
  /// cell_dim + 3*(trace_dim + flux_dim).
  int local_lambda_size() const;

  /// Global lambda indices of the local coefficients of triangle t, ordered
  /// [interior | traces of edges 0,1,2 | fluxes of edges 0,1,2]. Boundary
  /// trace coefficients map to -1 (constrained to zero).
  std::vector<int> local_lambda_dofs(int t) const;

private:
  const Mesh* mesh_;
  int k_;
  DofMap dofs_;
};

/// Coefficients of a weak function. Trace coefficients are stored for every
/// edge, including boundary edges, so the full (unconstrained) space is
/// representable; the solver keeps boundary traces at zero.
class WeakFunction {
public:
  WeakFunction() = default;
  explicit WeakFunction(const Space& space);

  Eigen::VectorXd& interior() { return interior_; }
  Eigen::VectorXd& trace() { return trace_; }
  Eigen::VectorXd& flux() { return flux_; }
  const Eigen::VectorXd& interior() const { return interior_; }
  const Eigen::VectorXd& trace() const { return trace_; }
  const Eigen::VectorXd& flux() const { return flux_; }

  /// Interior component on triangle t evaluated at x.
  double interior_value(const Space& space, int t, const Vec2& x) const;
  /// Gradient of the interior component on triangle t at x.
  Vec2 interior_gradient(const Space& space, int t, const Vec2& x) const;
  /// Trace component on edge e at parameter t01 in [0,1].
  double trace_value(const Space& space, int e, double t01) const;
  /// Stored flux component on edge e at parameter t01 (normal-side value).
  double flux_value(const Space& space, int e, double t01) const;

private:
  Eigen::VectorXd interior_, trace_, flux_;
};

/// Piecewise P_{k-1} function (the primal unknown).
class PrimalFunction {
public:
  PrimalFunction() = default;
  explicit PrimalFunction(const Space& space);

  Eigen::VectorXd& coeffs() { return coeffs_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  double value(const Space& space, int t, const Vec2& x) const;

private:
  Eigen::VectorXd coeffs_;
};

/// Packs the unconstrained coefficients into the solver layout
/// (boundary trace coefficients are dropped).
Eigen::VectorXd lambda_vector(const Space& space, const WeakFunction& w);

/// Expands a solver vector back into full storage (boundary traces zero).
WeakFunction lambda_from_vector(const Space& space, const Eigen::VectorXd& x);

/// Componentwise interpolant of a smooth-per-subdomain function u:
/// interior = cell projection of u, trace = edge projection of u from the
/// plus side, flux = edge projection of a * grad(u) . n from the plus side.
WeakFunction interpolate_weak(const Space& space, const ScalarField& u,
                              const VectorField& grad_u, const ScalarField& a,
                              QuadratureConfig quad = {});

/// Triangle-wise L2 projection onto P_{k-1}.
PrimalFunction project_primal(const Space& space, const ScalarField& u,
                              QuadratureConfig quad = {});

} // namespace pdwg
