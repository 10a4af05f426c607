#include <benchmark/benchmark.h>

#include <cmath>
#include <map>
#include <memory>

#include "cavityflow/nonlinear.hpp"
#include "cavityflow/postprocess.hpp"

using namespace cavityflow;

namespace {

const TaylorHoodSpace& space_for(int m) {
  static std::map<int, std::unique_ptr<TaylorHoodSpace>> cache;
  auto it = cache.find(m);
  if (it == cache.end())
    it = cache.emplace(m, std::make_unique<TaylorHoodSpace>(unit_square_mesh(m))).first;
  return *it->second;
}

Field advector(const TaylorHoodSpace& space) {
  return interpolate_velocity(space, [](const Eigen::Vector2d& x) {
    return Eigen::Vector2d(std::sin(3.0 * x.x()) * x.y(), std::cos(2.0 * x.y()));
  });
}

void BM_BuildSpace(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Mesh mesh = unit_square_mesh(m);
  for (auto _ : state) {
    TaylorHoodSpace space{Mesh(mesh)};
    benchmark::DoNotOptimize(space.n_u());
  }
}
BENCHMARK(BM_BuildSpace)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AssembleViscous(benchmark::State& state) {
  const TaylorHoodSpace& space = space_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto a = assemble_viscous(space);
    benchmark::DoNotOptimize(a.nnz());
  }
}
BENCHMARK(BM_AssembleViscous)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_AssembleConvectionNewton(benchmark::State& state) {
  const TaylorHoodSpace& space = space_for(static_cast<int>(state.range(0)));
  const Field uk = advector(space);
  for (auto _ : state) {
    auto c = assemble_convection(space, ConvectionForm::Conservative, Linearization::Newton, uk);
    benchmark::DoNotOptimize(c.matrix.nnz());
  }
}
BENCHMARK(BM_AssembleConvectionNewton)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_FactorizeLinearizedSystem(benchmark::State& state) {
  const TaylorHoodSpace& space = space_for(static_cast<int>(state.range(0)));
  const Field uk = advector(space);
  const auto conv =
      assemble_convection(space, ConvectionForm::Conservative, Linearization::Method2, uk);
  LinearSystem sys = compose_system(space, 1000.0, assemble_viscous(space),
                                    assemble_pressure_divergence(space), conv);
  apply_pressure_gauge(sys, space);
  apply_dirichlet(sys, space, lid_cavity_bc());
  DirectSolver solver;
  solver.factorize(sys.matrix);  // symbolic analysis outside the loop
  for (auto _ : state) {
    solver.factorize(sys.matrix);
    benchmark::DoNotOptimize(solver.factorization().dim());
  }
}
BENCHMARK(BM_FactorizeLinearizedSystem)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_NonlinearIteration(benchmark::State& state) {
  const TaylorHoodSpace& space = space_for(static_cast<int>(state.range(0)));
  const BoundaryConditions bc = lid_cavity_bc();
  SolverConfig cfg;
  cfg.reynolds = 1000.0;
  cfg.method = Linearization::Method2;
  SolutionState s = SolutionState::zero(space);
  for (auto _ : state) {
    s = iterate_once(s, cfg, bc);
    benchmark::DoNotOptimize(s.u.coeffs.sum());
  }
}
BENCHMARK(BM_NonlinearIteration)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_StreamFunction(benchmark::State& state) {
  const TaylorHoodSpace& space = space_for(static_cast<int>(state.range(0)));
  const Field u = advector(space);
  for (auto _ : state) {
    Field psi = stream_function(u);
    benchmark::DoNotOptimize(psi.coeffs.sum());
  }
}
BENCHMARK(BM_StreamFunction)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
