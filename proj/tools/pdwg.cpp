// Command-line driver: runs a catalog example or a config-file problem
// through a convergence study and exports the results.

#include "pdwg/analysis.hpp"
#include "pdwg/export.hpp"
#include "pdwg/problems.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

std::string sanitize(const std::string& name) {
  std::string out;
  for (char ch : name) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '-' || ch == '_';
    out.push_back(ok ? ch : '_');
  }
  return out.empty() ? std::string("problem") : out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdwg: primal-dual weak Galerkin solver for elliptic interface problems"};

  int example = 0;
  std::string problem_file, mesh_file, out_dir = ".";
  int k = 1, levels = 1, quad_degree = -1;
  double tau = 1.0;
  std::vector<std::string> exports{"csv", "json"};

  auto* ex_opt = app.add_option("--example", example,
                                "Built-in benchmark problem id (1..7)")
                     ->check(CLI::Range(1, 7));
  auto* pr_opt = app.add_option("--problem", problem_file,
                                "JSON problem description file")
                     ->check(CLI::ExistingFile);
  ex_opt->excludes(pr_opt);
  pr_opt->excludes(ex_opt);
  app.add_option("--mesh", mesh_file, "Initial mesh file (overrides the recipe)")
      ->check(CLI::ExistingFile);
  app.add_option("--k", k, "Polynomial order of the dual variable (default 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--levels", levels, "Number of uniform refinement levels (default 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--tau", tau, "Stabilizer volume weight (default 1)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "Output directory (default .)");
  app.add_option("--export", exports, "Artifacts to write: csv, json, vtk")
      ->check(CLI::IsMember({"csv", "json", "vtk"}))
      ->delimiter(',');
  app.add_option("--quadrature-degree", quad_degree,
                 "Override the quadrature exactness on cells and edges")
      ->check(CLI::Range(0, 30));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  if (ex_opt->count() == 0 && pr_opt->count() == 0) {
    std::cerr << "pdwg: exactly one of --example or --problem is required\n"
              << "Run with --help for usage.\n";
    return 2;
  }

  try {
    const pdwg::ProblemSpec problem = pr_opt->count() > 0
                                          ? pdwg::load_problem(problem_file)
                                          : pdwg::example_problem(example);

    const bool needs_import =
        problem.mesh_recipe.kind == pdwg::MeshRecipe::Kind::import_required &&
        !problem.mesh_recipe.file;
    if (needs_import && mesh_file.empty()) {
      std::cerr << "pdwg: problem '" << problem.name
                << "' has a curved interface and no built-in mesh; supply a "
                   "fitted mesh with --mesh <file>\n";
      return 2;
    }

    const std::optional<std::string> mesh_override =
        mesh_file.empty() ? std::nullopt : std::make_optional(mesh_file);
    const pdwg::Mesh initial = pdwg::recipe_mesh(problem, mesh_override);

    const pdwg::ValidationReport validation =
        pdwg::validate_problem(problem, initial);
    if (!validation.ok) {
      std::cerr << "pdwg: " << validation.summary() << '\n';
      return 1;
    }

    pdwg::QuadratureConfig quad;
    if (quad_degree >= 0) quad.cell = quad.edge = quad_degree;

    const pdwg::StudyResult study =
        pdwg::convergence_study(problem, initial, k, levels, tau, quad);
    pdwg::print_table(study.report, std::cout);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path base =
        std::filesystem::path(out_dir) /
        (sanitize(problem.name) + "_k" + std::to_string(k));
    for (const std::string& format : exports) {
      std::filesystem::path path = base;
      if (format == "csv") {
        path += ".csv";
        pdwg::write_csv(study.report, path.string());
      } else if (format == "json") {
        path += ".json";
        pdwg::write_json(study.report, path.string());
      } else {
        path += ".vtk";
        const pdwg::Space space(study.final_mesh, k);
        pdwg::write_vtk(space, study.final_solution, path.string());
      }
      std::cout << "wrote " << path.string() << '\n';
    }
  } catch (const pdwg::Error& err) {
    std::cerr << "pdwg: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "pdwg: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
