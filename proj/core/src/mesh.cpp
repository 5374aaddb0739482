#include "pdwg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace pdwg {

namespace {

bool lex_less(const Vec2& a, const Vec2& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  return a.y() < b.y();
}

std::pair<int, int> ordered(int a, int b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

Vec2 tri_centroid(const std::vector<Vec2>& pts, const std::array<int, 3>& v) {
  return (pts[v[0]] + pts[v[1]] + pts[v[2]]) / 3.0;
}

} // namespace

void Mesh::build(std::vector<Vec2> vertices,
                 std::vector<std::array<int, 4>> triangles,
                 std::vector<InterfaceTag> tags) {
  const int nv = static_cast<int>(vertices.size());
  const int nt = static_cast<int>(triangles.size());
  if (nv < 3 || nt < 1) throw MeshError("mesh needs at least one triangle");
  for (const auto& tri : triangles) {
    for (int j = 0; j < 3; ++j) {
      if (tri[j] < 0 || tri[j] >= nv)
        throw MeshError("triangle vertex index out of range");
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw MeshError("triangle with repeated vertices");
    if (tri[3] < 1) throw MeshError("subdomain ids must be >= 1");
  }

  // canonical vertex numbering: sort by coordinates
  std::vector<int> vorder(nv);
  std::iota(vorder.begin(), vorder.end(), 0);
  std::sort(vorder.begin(), vorder.end(), [&](int a, int b) {
    return lex_less(vertices[a], vertices[b]);
  });
  std::vector<int> vmap(nv);
  vertices_.resize(nv);
  for (int i = 0; i < nv; ++i) {
    vmap[vorder[i]] = i;
    vertices_[i] = vertices[vorder[i]];
  }
  for (int i = 0; i + 1 < nv; ++i) {
    if (vertices_[i] == vertices_[i + 1])
      throw MeshError("duplicate vertex coordinates");
  }

  // remap, orient counterclockwise, canonical triangle numbering
  struct RawTri {
    std::array<int, 3> v;
    int sub;
    Vec2 centroid;
  };
  std::vector<RawTri> raw(nt);
  for (int t = 0; t < nt; ++t) {
    RawTri r;
    r.v = {vmap[triangles[t][0]], vmap[triangles[t][1]], vmap[triangles[t][2]]};
    r.sub = triangles[t][3];
    TriangleGeometry g{{vertices_[r.v[0]], vertices_[r.v[1]], vertices_[r.v[2]]}};
    if (g.signed_area() < 0.0) std::swap(r.v[1], r.v[2]);
    // canonical rotation: the smallest vertex id leads, orientation unchanged
    std::rotate(r.v.begin(),
                std::min_element(r.v.begin(), r.v.end()), r.v.end());
    g = {{vertices_[r.v[0]], vertices_[r.v[1]], vertices_[r.v[2]]}};
    const double d = g.diameter();
    if (!(g.signed_area() > 1e-12 * d * d))
      throw MeshError("degenerate (zero-area) triangle");
    r.centroid = g.centroid();
    raw[t] = r;
  }
  std::vector<int> torder(nt);
  std::iota(torder.begin(), torder.end(), 0);
  std::sort(torder.begin(), torder.end(), [&](int a, int b) {
    return lex_less(raw[a].centroid, raw[b].centroid);
  });
  std::vector<int> tmap(nt);
  triangles_.assign(nt, MeshTriangle{});
  n_subdomains_ = 0;
  for (int t = 0; t < nt; ++t) {
    tmap[torder[t]] = t;
    const RawTri& r = raw[torder[t]];
    MeshTriangle& tri = triangles_[t];
    tri.v = r.v;
    tri.subdomain = r.sub;
    const TriangleGeometry g{{vertices_[r.v[0]], vertices_[r.v[1]], vertices_[r.v[2]]}};
    tri.area = g.area();
    tri.diameter = g.diameter();
    n_subdomains_ = std::max(n_subdomains_, r.sub);
  }
  {
    std::vector<char> present(n_subdomains_ + 1, 0);
    for (const auto& tri : triangles_) present[tri.subdomain] = 1;
    for (int s = 1; s <= n_subdomains_; ++s) {
      if (!present[s])
        throw MeshError("subdomain ids must form a contiguous range 1..N");
    }
  }

  // edge table from triangle sides
  std::map<std::pair<int, int>, int> edge_of;
  std::vector<MeshEdge> raw_edges;
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      const auto key = ordered(triangles_[t].v[i], triangles_[t].v[(i + 1) % 3]);
      auto [it, inserted] = edge_of.try_emplace(key, static_cast<int>(raw_edges.size()));
      if (inserted) {
        MeshEdge e;
        e.v = {key.first, key.second};
        e.tris = {t, -1};
        raw_edges.push_back(e);
      } else {
        MeshEdge& e = raw_edges[it->second];
        if (e.tris[1] != -1)
          throw MeshError("non-conforming mesh: edge shared by more than two triangles");
        e.tris[1] = t;
      }
    }
  }

  // canonical edge numbering: sort by midpoint
  const int ne = static_cast<int>(raw_edges.size());
  std::vector<int> eorder(ne);
  std::iota(eorder.begin(), eorder.end(), 0);
  std::sort(eorder.begin(), eorder.end(), [&](int a, int b) {
    const Vec2 ma = 0.5 * (vertices_[raw_edges[a].v[0]] + vertices_[raw_edges[a].v[1]]);
    const Vec2 mb = 0.5 * (vertices_[raw_edges[b].v[0]] + vertices_[raw_edges[b].v[1]]);
    return lex_less(ma, mb);
  });
  std::vector<int> emap(ne);
  edges_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    emap[eorder[e]] = e;
    edges_[e] = raw_edges[eorder[e]];
  }
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      const auto key = ordered(triangles_[t].v[i], triangles_[t].v[(i + 1) % 3]);
      triangles_[t].edges[i] = emap[edge_of.at(key)];
    }
  }

  // interface tags (remapped through the canonical numbering)
  std::map<int, InterfaceTag> tag_of_edge;
  for (InterfaceTag tag : tags) {
    if (tag.va < 0 || tag.va >= nv || tag.vb < 0 || tag.vb >= nv)
      throw MeshError("interface tag vertex index out of range");
    const auto key = ordered(vmap[tag.va], vmap[tag.vb]);
    const auto it = edge_of.find(key);
    if (it == edge_of.end())
      throw MeshError("interface tag does not match any mesh edge");
    const int e = emap[it->second];
    if (tag.piece < 1) throw MeshError("interface piece ids must be >= 1");
    if (tag.plus_tri >= 0) {
      if (tag.plus_tri >= nt)
        throw MeshError("interface tag plus-triangle index out of range");
      tag.plus_tri = tmap[tag.plus_tri];
    }
    if (!tag_of_edge.emplace(e, tag).second)
      throw MeshError("duplicate interface tag for one edge");
  }

  // classification, orientation, plus sides
  n_boundary_edges_ = 0;
  n_interface_edges_ = 0;
  n_pieces_ = 0;
  for (int e = 0; e < ne; ++e) {
    MeshEdge& edge = edges_[e];
    const Vec2 pa = vertices_[edge.v[0]];
    const Vec2 pb = vertices_[edge.v[1]];
    edge.length = (pb - pa).norm();
    const Vec2 mid = 0.5 * (pa + pb);
    const auto tag_it = tag_of_edge.find(e);

    if (edge.tris[1] == -1) {
      if (tag_it != tag_of_edge.end())
        throw MeshError("interface tag on a boundary edge");
      edge.kind = EdgeKind::boundary;
      edge.plus_tri = edge.tris[0];
      ++n_boundary_edges_;
    } else {
      const int sub0 = triangles_[edge.tris[0]].subdomain;
      const int sub1 = triangles_[edge.tris[1]].subdomain;
      if (tag_it != tag_of_edge.end()) {
        if (sub0 == sub1)
          throw MeshError("interface edge whose incident triangles share a subdomain id");
        edge.kind = EdgeKind::interface;
        edge.piece = tag_it->second.piece;
        n_pieces_ = std::max(n_pieces_, edge.piece);
        ++n_interface_edges_;
        if (tag_it->second.plus_tri >= 0) {
          edge.plus_tri = tag_it->second.plus_tri;
          if (edge.plus_tri != edge.tris[0] && edge.plus_tri != edge.tris[1])
            throw MeshError("interface plus-triangle is not incident to the edge");
        } else {
          // convention: the lower-numbered subdomain is the plus side
          edge.plus_tri = sub0 < sub1 ? edge.tris[0] : edge.tris[1];
        }
      } else {
        if (sub0 != sub1)
          throw MeshError("untagged edge between different subdomains; "
                          "subdomain boundaries must be tagged as interface");
        edge.kind = EdgeKind::interior;
      }
    }

    if (edge.kind == EdgeKind::interior) {
      // fixed orientation from the vertex numbering; plus side derived
      const Vec2 t01 = (pb - pa).normalized();
      edge.normal = rotate90(t01);
      const Vec2 c0 = tri_centroid(vertices_, triangles_[edge.tris[0]].v);
      const Vec2 c1 = tri_centroid(vertices_, triangles_[edge.tris[1]].v);
      edge.plus_tri = edge.normal.dot(c1 - c0) > 0.0 ? edge.tris[0] : edge.tris[1];
    } else {
      // outward from the plus triangle
      Vec2 n = rotate90((pb - pa).normalized());
      const Vec2 cp = tri_centroid(vertices_, triangles_[edge.plus_tri].v);
      if (n.dot(mid - cp) < 0.0) n = -n;
      edge.normal = n;
    }
  }
  if (n_pieces_ > 0) {
    std::vector<char> present(n_pieces_ + 1, 0);
    for (const auto& e : edges_) {
      if (e.kind == EdgeKind::interface) present[e.piece] = 1;
    }
    for (int p = 1; p <= n_pieces_; ++p) {
      if (!present[p])
        throw MeshError("interface piece ids must form a contiguous range 1..M");
    }
  }

  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      triangles_[t].edge_sign[i] =
          edges_[triangles_[t].edges[i]].plus_tri == t ? 1.0 : -1.0;
    }
  }
}

Mesh Mesh::from_data(std::vector<Vec2> vertices,
                     std::vector<std::array<int, 4>> triangles,
                     std::vector<InterfaceTag> interface_tags) {
  Mesh mesh;
  mesh.build(std::move(vertices), std::move(triangles), std::move(interface_tags));
  return mesh;
}

Mesh Mesh::structured(int n, const std::optional<InterfaceSquare>& interface) {
  if (n < 2) throw MeshError("structured mesh requires n >= 2");
  std::vector<Vec2> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    }
  }
  const auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  int ix0 = 0, ix1 = 0, iy0 = 0, iy1 = 0;
  if (interface) {
    const auto snap = [n](double c, const char* name) {
      const double scaled = c * n;
      const long r = std::lround(scaled);
      if (std::abs(scaled - static_cast<double>(r)) > 1e-9)
        throw MeshError(std::string("interface coordinate ") + name +
                        " is not a multiple of 1/n");
      return static_cast<int>(r);
    };
    ix0 = snap(interface->x0, "x0");
    ix1 = snap(interface->x1, "x1");
    iy0 = snap(interface->y0, "y0");
    iy1 = snap(interface->y1, "y1");
    if (!(0 < ix0 && ix0 < ix1 && ix1 < n && 0 < iy0 && iy0 < iy1 && iy1 < n))
      throw MeshError("interface square must lie strictly inside the unit square");
  }
  const auto inside = [&](double cx, double cy) {
    return interface && cx > static_cast<double>(ix0) / n &&
           cx < static_cast<double>(ix1) / n && cy > static_cast<double>(iy0) / n &&
           cy < static_cast<double>(iy1) / n;
  };

  std::vector<std::array<int, 4>> triangles;
  triangles.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::array<int, 3> lower = {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)};
      const std::array<int, 3> upper = {vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)};
      for (const auto& tv : {lower, upper}) {
        const Vec2 c = (vertices[tv[0]] + vertices[tv[1]] + vertices[tv[2]]) / 3.0;
        const int sub = !interface || inside(c.x(), c.y()) ? 1 : 2;
        triangles.push_back({tv[0], tv[1], tv[2], sub});
      }
    }
  }

  std::vector<InterfaceTag> tags;
  if (interface) {
    for (int j = iy0; j < iy1; ++j) {
      tags.push_back({vid(ix0, j), vid(ix0, j + 1), 1, -1}); // left side
      tags.push_back({vid(ix1, j), vid(ix1, j + 1), 2, -1}); // right side
    }
    for (int i = ix0; i < ix1; ++i) {
      tags.push_back({vid(i, iy0), vid(i + 1, iy0), 3, -1}); // bottom side
      tags.push_back({vid(i, iy1), vid(i + 1, iy1), 4, -1}); // top side
    }
  }
  return from_data(std::move(vertices), std::move(triangles), std::move(tags));
}

Mesh Mesh::refined() const {
  std::vector<Vec2> vertices(vertices_);
  std::map<std::pair<int, int>, int> midpoint;
  const auto mid_id = [&](int a, int b) {
    const auto key = ordered(a, b);
    const auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (vertices_[a] + vertices_[b]));
    midpoint.emplace(key, id);
    return id;
  };

  std::vector<std::array<int, 4>> children;
  children.reserve(4 * triangle_count());
  // children[4t + local corner] touches parent vertex `local corner`
  for (int t = 0; t < triangle_count(); ++t) {
    const auto& tv = triangles_[t].v;
    const int m01 = mid_id(tv[0], tv[1]);
    const int m12 = mid_id(tv[1], tv[2]);
    const int m20 = mid_id(tv[2], tv[0]);
    const int sub = triangles_[t].subdomain;
    children.push_back({tv[0], m01, m20, sub});
    children.push_back({tv[1], m12, m01, sub});
    children.push_back({tv[2], m20, m12, sub});
    children.push_back({m01, m12, m20, sub});
  }

  std::vector<InterfaceTag> tags;
  for (const auto& edge : edges_) {
    if (edge.kind != EdgeKind::interface) continue;
    const int m = mid_id(edge.v[0], edge.v[1]);
    const auto& pv = triangles_[edge.plus_tri].v;
    for (const int endpoint : {edge.v[0], edge.v[1]}) {
      int corner = -1;
      for (int i = 0; i < 3; ++i) {
        if (pv[i] == endpoint) corner = i;
      }
      tags.push_back({endpoint, m, edge.piece, 4 * edge.plus_tri + corner});
    }
  }
  return from_data(std::move(vertices), std::move(children), std::move(tags));
}

TriangleGeometry Mesh::geometry(int t) const {
  const auto& tv = triangles_[t].v;
  return TriangleGeometry{{vertices_[tv[0]], vertices_[tv[1]], vertices_[tv[2]]}};
}

std::array<Vec2, 2> Mesh::edge_points(int e) const {
  return {vertices_[edges_[e].v[0]], vertices_[edges_[e].v[1]]};
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (const auto& tri : triangles_) h = std::max(h, tri.diameter);
  return h;
}

double Mesh::subdomain_area(int id) const {
  double area = 0.0;
  for (const auto& tri : triangles_) {
    if (tri.subdomain == id) area += tri.area;
  }
  return area;
}

int Mesh::euler_characteristic() const {
  return vertex_count() - edge_count() + triangle_count();
}

int Mesh::locate(const Vec2& x) const {
  for (int t = 0; t < triangle_count(); ++t) {
    const Eigen::Vector3d lam = barycentric(geometry(t), x);
    if (lam.minCoeff() >= -1e-12) return t;
  }
  return -1;
}

void Mesh::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "pdwg-mesh 1\n";
  out << "vertices " << vertex_count() << "\n";
  char line[80];
  for (const auto& v : vertices_) {
    std::snprintf(line, sizeof(line), "%.17g %.17g\n", v.x(), v.y());
    out << line;
  }
  out << "triangles " << triangle_count() << "\n";
  for (const auto& t : triangles_) {
    out << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << ' ' << t.subdomain << "\n";
  }
  out << "interface_edges " << n_interface_edges_ << "\n";
  for (const auto& e : edges_) {
    if (e.kind != EdgeKind::interface) continue;
    out << e.v[0] << ' ' << e.v[1] << ' ' << e.piece << ' ' << e.plus_tri << "\n";
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

Mesh Mesh::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file '" + path + "'");

  const auto fail = [&path](const std::string& what) -> MeshError {
    return MeshError("mesh file '" + path + "': " + what);
  };

  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "pdwg-mesh")
    throw fail("missing 'pdwg-mesh <version>' header");
  if (version != 1) throw fail("unsupported format version");

  const auto expect_section = [&](const char* name) {
    std::string word;
    long count = -1;
    if (!(in >> word >> count) || word != name || count < 0)
      throw fail(std::string("expected section '") + name + " <count>'");
    return count;
  };

  const long nv = expect_section("vertices");
  std::vector<Vec2> vertices(nv);
  for (long i = 0; i < nv; ++i) {
    if (!(in >> vertices[i].x() >> vertices[i].y()))
      throw fail("malformed vertex line");
  }
  const long nt = expect_section("triangles");
  std::vector<std::array<int, 4>> triangles(nt);
  for (long t = 0; t < nt; ++t) {
    auto& tri = triangles[t];
    if (!(in >> tri[0] >> tri[1] >> tri[2] >> tri[3]))
      throw fail("malformed triangle line");
  }
  const long nifc = expect_section("interface_edges");
  std::vector<InterfaceTag> tags(nifc);
  for (long e = 0; e < nifc; ++e) {
    auto& tag = tags[e];
    if (!(in >> tag.va >> tag.vb >> tag.piece >> tag.plus_tri))
      throw fail("malformed interface edge line");
  }
  std::string extra;
  if (in >> extra) throw fail("unexpected trailing content '" + extra + "'");

  return from_data(std::move(vertices), std::move(triangles), std::move(tags));
}

void Mesh::validate() const {
  for (int i = 0; i + 1 < vertex_count(); ++i) {
    if (!lex_less(vertices_[i], vertices_[i + 1]))
      throw MeshError("vertex numbering is not canonical");
  }
  for (int t = 0; t < triangle_count(); ++t) {
    const TriangleGeometry g = geometry(t);
    if (!(g.signed_area() > 0.0))
      throw MeshError("triangle is not counterclockwise or degenerate");
    if (std::abs(g.area() - triangles_[t].area) > 1e-14 * g.area())
      throw MeshError("stored triangle area is stale");
    if (std::abs(g.diameter() - triangles_[t].diameter) > 1e-14 * g.diameter())
      throw MeshError("stored triangle diameter is stale");
  }
  std::map<std::pair<int, int>, int> incidence;
  for (int t = 0; t < triangle_count(); ++t) {
    for (int i = 0; i < 3; ++i) {
      ++incidence[ordered(triangles_[t].v[i], triangles_[t].v[(i + 1) % 3])];
    }
  }
  for (const auto& [key, count] : incidence) {
    if (count > 2) throw MeshError("edge shared by more than two triangles");
  }
  for (int e = 0; e < edge_count(); ++e) {
    const MeshEdge& edge = edges_[e];
    if (edge.v[0] >= edge.v[1]) throw MeshError("edge endpoints out of order");
    if (std::abs(edge.normal.norm() - 1.0) > 1e-12)
      throw MeshError("edge normal is not a unit vector");
    const bool boundary = edge.tris[1] == -1;
    if (boundary != (edge.kind == EdgeKind::boundary))
      throw MeshError("edge boundary classification inconsistent");
    if (edge.plus_tri != edge.tris[0] && edge.plus_tri != edge.tris[1])
      throw MeshError("edge plus-triangle is not incident");
    const Vec2 mid = 0.5 * (vertices_[edge.v[0]] + vertices_[edge.v[1]]);
    const Vec2 cp = tri_centroid(vertices_, triangles_[edge.plus_tri].v);
    if (boundary) {
      if (edge.normal.dot(mid - cp) <= 0.0)
        throw MeshError("boundary edge normal does not point outward");
    } else {
      const int other = edge.plus_tri == edge.tris[0] ? edge.tris[1] : edge.tris[0];
      const Vec2 co = tri_centroid(vertices_, triangles_[other].v);
      if (edge.normal.dot(co - cp) <= 0.0)
        throw MeshError("edge normal does not point from the plus side to the other side");
      const int sub_p = triangles_[edge.plus_tri].subdomain;
      const int sub_o = triangles_[other].subdomain;
      if ((edge.kind == EdgeKind::interface) != (sub_p != sub_o))
        throw MeshError("interface tagging inconsistent with subdomain ids");
      if (edge.kind == EdgeKind::interface && edge.piece < 1)
        throw MeshError("interface edge without a piece id");
    }
  }
  for (int t = 0; t < triangle_count(); ++t) {
    for (int i = 0; i < 3; ++i) {
      const int e = triangles_[t].edges[i];
      const auto key = ordered(triangles_[t].v[i], triangles_[t].v[(i + 1) % 3]);
      if (std::make_pair(edges_[e].v[0], edges_[e].v[1]) != key)
        throw MeshError("triangle edge table is stale");
      const double sign = edges_[e].plus_tri == t ? 1.0 : -1.0;
      if (sign != triangles_[t].edge_sign[i])
        throw MeshError("triangle edge sign is stale");
    }
  }
}

} // namespace pdwg
