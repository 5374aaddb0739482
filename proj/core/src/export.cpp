#include "pdwg/export.hpp"

#include "pdwg/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>

namespace pdwg {

namespace {

std::string num(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

/// Triangle containing x, falling back to the nearest centroid.
int locate_or_nearest(const Mesh& mesh, const Vec2& x) {
  const int hit = mesh.locate(x);
  if (hit >= 0) return hit;
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double dist = (mesh.geometry(t).centroid() - x).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = t;
    }
  }
  return best;
}

} // namespace

void write_vtk(const Space& space, const Solution& solution,
               const std::string& path) {
  const Mesh& mesh = space.mesh();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");

  out << "# vtk DataFile Version 3.0\n"
      << "pdwg solution\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    const Vec2& v = mesh.vertex(i);
    out << num(v.x()) << ' ' << num(v.y()) << " 0\n";
  }
  const int nt = mesh.triangle_count();
  out << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (int t = 0; t < nt; ++t) {
    const auto& v = mesh.triangle(t).v;
    out << "3 " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  }
  out << "CELL_TYPES " << nt << '\n';
  for (int t = 0; t < nt; ++t) out << "5\n";

  out << "CELL_DATA " << nt << '\n';
  out << "SCALARS u_h double 1\nLOOKUP_TABLE default\n";
  for (int t = 0; t < nt; ++t) {
    const Vec2 c = mesh.geometry(t).centroid();
    out << num(solution.u.value(space, t, c)) << '\n';
  }
  out << "SCALARS lambda_0 double 1\nLOOKUP_TABLE default\n";
  for (int t = 0; t < nt; ++t) {
    const Vec2 c = mesh.geometry(t).centroid();
    out << num(solution.lambda.interior_value(space, t, c)) << '\n';
  }
  out << "SCALARS subdomain int 1\nLOOKUP_TABLE default\n";
  for (int t = 0; t < nt; ++t) out << mesh.triangle(t).subdomain << '\n';
  if (!out) throw IoError("failed while writing '" + path + "'");
}

void write_sample_csv(const Space& space, const Solution& solution,
                      const std::string& path, int grid) {
  if (grid < 2) throw ConfigError("sample grid must be at least 2");
  const Mesh& mesh = space.mesh();

  Vec2 lo(std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    lo = lo.cwiseMin(mesh.vertex(i));
    hi = hi.cwiseMax(mesh.vertex(i));
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "x,y,subdomain,u_h,lambda_0\n";
  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      const Vec2 x(lo.x() + (hi.x() - lo.x()) * i / (grid - 1),
                   lo.y() + (hi.y() - lo.y()) * j / (grid - 1));
      const int t = locate_or_nearest(mesh, x);
      out << num(x.x()) << ',' << num(x.y()) << ','
          << mesh.triangle(t).subdomain << ','
          << num(solution.u.value(space, t, x)) << ','
          << num(solution.lambda.interior_value(space, t, x)) << '\n';
    }
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

} // namespace pdwg
