// Wall-clock benchmarks of the pipeline stages: uniform refinement, system
// assembly, and the direct solve, each on a sequence of refinement levels of
// the square-interface benchmark problem.

#include "pdwg/analysis.hpp"
#include "pdwg/assembly.hpp"
#include "pdwg/problems.hpp"
#include "pdwg/solver.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace pdwg;

Mesh mesh_at_level(int level) {
  Mesh mesh = recipe_mesh(example_problem(1), std::nullopt);
  for (int i = 0; i < level; ++i) mesh = mesh.refined();
  return mesh;
}

void BM_refine(benchmark::State& state) {
  const Mesh mesh = mesh_at_level(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Mesh fine = mesh.refined();
    benchmark::DoNotOptimize(fine.triangle_count());
  }
  state.SetItemsProcessed(state.iterations() * mesh.triangle_count());
}

void BM_assemble(benchmark::State& state) {
  const ProblemSpec problem = example_problem(1);
  const Mesh mesh = mesh_at_level(static_cast<int>(state.range(0)));
  const Space space(mesh, static_cast<int>(state.range(1)));
  for (auto _ : state) {
    const SaddleSystem system = assemble_system(space, problem);
    benchmark::DoNotOptimize(system.K.nonZeros());
  }
  state.counters["n_dof"] = static_cast<double>(space.dofs().total());
}

void BM_solve(benchmark::State& state) {
  const ProblemSpec problem = example_problem(1);
  const Mesh mesh = mesh_at_level(static_cast<int>(state.range(0)));
  const Space space(mesh, static_cast<int>(state.range(1)));
  const SaddleSystem system = assemble_system(space, problem);
  for (auto _ : state) {
    const Solution solution = solve(space, system);
    benchmark::DoNotOptimize(solution.diagnostics.residual);
  }
  state.counters["n_dof"] = static_cast<double>(space.dofs().total());
}

} // namespace

BENCHMARK(BM_refine)->Arg(0)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_assemble)
    ->Args({0, 1})
    ->Args({1, 1})
    ->Args({2, 1})
    ->Args({0, 2})
    ->Args({1, 2})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve)
    ->Args({0, 1})
    ->Args({1, 1})
    ->Args({2, 1})
    ->Args({0, 2})
    ->Args({1, 2})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
