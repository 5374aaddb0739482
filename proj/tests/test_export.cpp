#include "pdwg/export.hpp"

#include "pdwg/assembly.hpp"
#include "pdwg/errors.hpp"
#include "pdwg/problems.hpp"
#include "pdwg/solver.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>
#include <unistd.h>

using namespace pdwg;

namespace {

std::string temp_path(const std::string& stem) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path();
  return (dir / (stem + "-" + std::to_string(::getpid()) + "-" +
                 std::to_string(counter++)))
      .string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

/// One solved instance shared by the suite; the mesh outlives the space it
/// is bound to because both live in the same static object.
struct Fixture {
  ProblemSpec problem = example_problem(1);
  Mesh mesh = recipe_mesh(problem, std::nullopt);
  Space space{mesh, 1};
  Solution solution = solve(space, assemble_system(space, problem));
};

const Fixture& fixture() {
  static Fixture f;
  return f;
}

} // namespace

TEST_SUITE("export") {

TEST_CASE("vtk export is a structurally complete legacy file") {
  const Fixture& f = fixture();
  const std::string path = temp_path("solution") + ".vtk";
  write_vtk(f.space, f.solution, path);
  const std::string text = slurp(path);
  std::remove(path.c_str());

  CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
  CHECK(text.find("ASCII\n") != std::string::npos);
  CHECK(text.find("DATASET UNSTRUCTURED_GRID\n") != std::string::npos);
  CHECK(text.find("POINTS 25 double\n") != std::string::npos);
  CHECK(text.find("CELLS 32 128\n") != std::string::npos);
  CHECK(text.find("CELL_TYPES 32\n") != std::string::npos);
  CHECK(text.find("CELL_DATA 32\n") != std::string::npos);
  CHECK(text.find("SCALARS u_h double 1\n") != std::string::npos);
  CHECK(text.find("SCALARS lambda_0 double 1\n") != std::string::npos);
  CHECK(text.find("SCALARS subdomain int 1\n") != std::string::npos);

  // every cell is a linear triangle
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        4 + 1 + 25 + 1 + 32 + 1 + 32 + 1 + 2 + 32 + 2 + 32 + 2 + 32);
  // all printed values are finite
  CHECK(text.find("nan") == std::string::npos);
  CHECK(text.find("inf") == std::string::npos);
}

TEST_CASE("vtk export is byte-deterministic") {
  const Fixture& f = fixture();
  const std::string a = temp_path("solution") + ".vtk";
  const std::string b = temp_path("solution") + ".vtk";
  write_vtk(f.space, f.solution, a);
  write_vtk(f.space, f.solution, b);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("sample csv emits exactly grid*grid rows over the bounding box") {
  const Fixture& f = fixture();
  const std::string path = temp_path("samples") + ".csv";
  write_sample_csv(f.space, f.solution, path, 5);
  const std::string text = slurp(path);
  std::remove(path.c_str());

  std::istringstream in(text);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "x,y,subdomain,u_h,lambda_0");

  int rows = 0;
  bool corner00 = false, corner11 = false;
  while (std::getline(in, line)) {
    const std::vector<std::string> fields = split(line, ',');
    REQUIRE(fields.size() == 5);
    const double x = std::stod(fields[0]);
    const double y = std::stod(fields[1]);
    const int sub = std::stoi(fields[2]);
    const double uh = std::stod(fields[3]);
    const double l0 = std::stod(fields[4]);
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
    CHECK(y >= 0.0);
    CHECK(y <= 1.0);
    CHECK((sub == 1 || sub == 2));
    CHECK(std::isfinite(uh));
    CHECK(std::isfinite(l0));
    if (x == 0.0 && y == 0.0) corner00 = true;
    if (x == 1.0 && y == 1.0) corner11 = true;
    ++rows;
  }
  CHECK(rows == 25);
  CHECK(corner00);
  CHECK(corner11);
}

TEST_CASE("sample csv is byte-deterministic") {
  const Fixture& f = fixture();
  const std::string a = temp_path("samples") + ".csv";
  const std::string b = temp_path("samples") + ".csv";
  write_sample_csv(f.space, f.solution, a, 8);
  write_sample_csv(f.space, f.solution, b, 8);
  CHECK(slurp(a) == slurp(b));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("degenerate sample grids are rejected") {
  const Fixture& f = fixture();
  const std::string path = temp_path("samples") + ".csv";
  CHECK_THROWS_AS(write_sample_csv(f.space, f.solution, path, 1), ConfigError);
  CHECK_THROWS_AS(write_sample_csv(f.space, f.solution, path, 0), ConfigError);
  CHECK_THROWS_AS(write_sample_csv(f.space, f.solution, path, -4), ConfigError);
}

TEST_CASE("exports refuse unwritable paths") {
  const Fixture& f = fixture();
  CHECK_THROWS_AS(write_vtk(f.space, f.solution, "/nonexistent/dir/a.vtk"),
                  IoError);
  CHECK_THROWS_AS(write_sample_csv(f.space, f.solution, "/nonexistent/dir/a.csv", 4),
                  IoError);
}

} // TEST_SUITE
