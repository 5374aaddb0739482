// Problem descriptions: coefficients, data, exact solutions, mesh recipes.
//
// The model problem on a domain split into subdomains Omega_i by a tagged
// interface is
//   -div(a grad u) + div(b u) + c u = f
// with Dirichlet boundary values, a prescribed solution jump phi_m and a
// prescribed flux jump psi_m = [[ (a grad u - b u) . n_m ]] across each
// interface piece m. Jumps are plus-side minus minus-side values, where the
// plus side is fixed by the mesh's interface orientation.

#pragma once

#include "pdwg/mesh.hpp"
#include "pdwg/weak_space.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pdwg {

/// Flux-jump data on an interface piece: (piece id, point, unit normal) ->
/// scalar jump of the conormal flux. Vector-valued data is dotted with the
/// normal inside the callable.
using FluxJump = std::function<double(int, const Vec2&, const Vec2&)>;

/// How a problem obtains its initial mesh.
struct MeshRecipe {
  enum class Kind { structured, import_required };
  Kind kind = Kind::structured;
  int n = 4;
  std::optional<InterfaceSquare> square;
  std::optional<std::string> file; ///< set by config files that name a mesh
};

struct ProblemSpec {
  std::string name;
  int subdomain_count = 1;

  ScalarField a; ///< diffusion, per subdomain; must be positive
  VectorField b; ///< convection, per subdomain
  ScalarField c; ///< reaction, per subdomain
  ScalarField f; ///< source, per subdomain

  ScalarField g; ///< Dirichlet boundary value, per subdomain

  /// Interface data per piece id. piece_count = 0 with any_piece = true means
  /// the callables accept every piece id (data derived from exact branches).
  int piece_count = 0;
  bool any_piece = false;
  ScalarField phi; ///< solution jump per piece
  FluxJump psi;    ///< conormal flux jump per piece

  bool has_exact = false;
  ScalarField exact_u;
  VectorField exact_grad;

  MeshRecipe mesh_recipe;
};

/// Built-in benchmark problems 1..7. 1 has a square interface and a smooth
/// manufactured solution; 2-5 have curved interfaces (fitted meshes must be
/// imported); 6 and 7 prescribe jump data directly and have no closed-form
/// solution.
ProblemSpec example_problem(int id);

/// Loads a problem from a JSON config file (see README for the schema).
ProblemSpec load_problem(const std::string& config_path);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;
  std::string summary() const;
};

/// Checks a problem against a mesh: positive diffusion at quadrature points,
/// subdomain and interface tags covered by data, boundary data present, and,
/// when an exact solution is given, consistency of the prescribed jumps with
/// the exact branches on the interface.
ValidationReport validate_problem(const ProblemSpec& problem, const Mesh& mesh);

/// Builds the initial mesh of a problem. mesh_file overrides the recipe;
/// throws ConfigError when the problem requires an imported mesh and none is
/// given.
Mesh recipe_mesh(const ProblemSpec& problem,
                 const std::optional<std::string>& mesh_file = std::nullopt);

} // namespace pdwg
