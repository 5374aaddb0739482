// Solution field exports: legacy VTK and point-sample CSV.

#pragma once

#include "pdwg/solver.hpp"

#include <string>

namespace pdwg {

/// Legacy ASCII VTK unstructured grid with cell data u_h, lambda_0 (both at
/// centroids) and the subdomain id.
void write_vtk(const Space& space, const Solution& solution,
               const std::string& path);

/// CSV samples "x,y,subdomain,u_h,lambda_0" on a uniform grid x grid lattice
/// over the mesh bounding box. Emits exactly grid*grid rows; points outside
/// the mesh are attributed to the nearest triangle.
void write_sample_csv(const Space& space, const Solution& solution,
                      const std::string& path, int grid);

} // namespace pdwg
