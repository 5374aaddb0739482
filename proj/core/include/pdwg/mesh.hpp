// Conforming triangular meshes with subdomain and interface tags.
//
// Every construction path (structured generator, uniform refinement, raw
// arrays, file import) canonicalizes the numbering: vertices, triangles and
// edges are sorted lexicographically by coordinates (vertex position, triangle
// centroid, edge midpoint). Two descriptions of the same geometry therefore
// produce identical objects, and downstream results do not depend on the
// ordering of the input.
//
// Each edge carries a fixed unit normal and a distinguished "plus" triangle;
// the normal always points from the plus side into the other side (outward on
// the boundary). Interface data and flux unknowns are oriented by this pair.

#pragma once

#include "pdwg/errors.hpp"
#include "pdwg/geometry.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pdwg {

enum class EdgeKind { interior, boundary, interface };

struct MeshEdge {
  std::array<int, 2> v{-1, -1};      ///< endpoint vertex ids, v[0] < v[1]
  std::array<int, 2> tris{-1, -1};   ///< incident triangles; tris[1] = -1 on the boundary
  EdgeKind kind = EdgeKind::interior;
  int piece = 0;                     ///< interface piece id (>= 1) when kind == interface
  int plus_tri = -1;                 ///< triangle the normal points away from
  Vec2 normal = Vec2::Zero();        ///< unit normal, plus side -> other side
  double length = 0.0;
};

struct MeshTriangle {
  std::array<int, 3> v{-1, -1, -1};  ///< vertex ids, counterclockwise
  int subdomain = 1;                 ///< 1-based subdomain id
  double area = 0.0;
  double diameter = 0.0;             ///< longest edge length h_T
  std::array<int, 3> edges{-1, -1, -1};     ///< edge i joins v[i] and v[(i+1)%3]
  std::array<double, 3> edge_sign{0, 0, 0}; ///< +1 when this triangle is the plus side
};

/// Axis-aligned interface rectangle for the structured generator.
struct InterfaceSquare {
  double x0, x1, y0, y1;
};

/// Interface tag attached to raw input data (vertex pair in input numbering).
struct InterfaceTag {
  int va = -1, vb = -1;
  int piece = 0;
  int plus_tri = -1;
};

class Mesh {
public:
  /// Uniform n x n grid of the unit square, each cell split along the
  /// bottom-left to top-right diagonal. When an interface rectangle is given
  /// (its coordinates must be multiples of 1/n) triangles inside it form
  /// subdomain 1, the rest subdomain 2, and the four interface sides are
  /// tagged as pieces 1..4 = left, right, bottom, top.
  static Mesh structured(int n, const std::optional<InterfaceSquare>& interface = std::nullopt);

  /// Builds a mesh from raw arrays; triangles are (v0, v1, v2, subdomain_id).
  static Mesh from_data(std::vector<Vec2> vertices,
                        std::vector<std::array<int, 4>> triangles,
                        std::vector<InterfaceTag> interface_tags = {});

  /// Reads the textual mesh format (see save()).
  static Mesh load(const std::string& path);

  /// Writes the textual mesh format:
  ///   pdwg-mesh 1
  ///   vertices <count>        followed by "x y" lines
  ///   triangles <count>       followed by "v0 v1 v2 subdomain" lines
  ///   interface_edges <count> followed by "va vb piece plus_triangle" lines
  void save(const std::string& path) const;

  /// Uniform refinement: every triangle is split into four congruent children
  /// through the edge midpoints. Subdomain tags are inherited; children of an
  /// interface edge keep its piece id and normal orientation.
  Mesh refined() const;

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int boundary_edge_count() const { return n_boundary_edges_; }
  int interior_edge_count() const { return edge_count() - n_boundary_edges_; }
  int interface_edge_count() const { return n_interface_edges_; }

  const Vec2& vertex(int i) const { return vertices_[i]; }
  const MeshTriangle& triangle(int t) const { return triangles_[t]; }
  const MeshEdge& edge(int e) const { return edges_[e]; }

  TriangleGeometry geometry(int t) const;
  /// Endpoints of an edge in canonical order (lower vertex id first).
  std::array<Vec2, 2> edge_points(int e) const;

  /// Largest triangle diameter: the global mesh size h.
  double max_diameter() const;

  int subdomain_count() const { return n_subdomains_; }
  int interface_piece_count() const { return n_pieces_; }
  double subdomain_area(int id) const;

  /// V - E + F; equals 1 for a triangulated simply connected domain.
  int euler_characteristic() const;

  /// Index of a triangle containing x (ties broken by lowest index),
  /// or -1 when x lies outside the mesh.
  int locate(const Vec2& x) const;

  /// Re-checks every construction invariant; throws MeshError on violation.
  void validate() const;

private:
  Mesh() = default;
  void build(std::vector<Vec2> vertices,
             std::vector<std::array<int, 4>> triangles,
             std::vector<InterfaceTag> interface_tags);

  std::vector<Vec2> vertices_;
  std::vector<MeshTriangle> triangles_;
  std::vector<MeshEdge> edges_;
  int n_boundary_edges_ = 0;
  int n_interface_edges_ = 0;
  int n_subdomains_ = 0;
  int n_pieces_ = 0;
};

} // namespace pdwg
