#include <benchmark/benchmark.h>

#include "hpdg/experiments.hpp"

namespace {

hpdg::DGConfig bench_config() { return hpdg::DGConfig::sipg(10.0); }

void BM_Assemble(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const hpdg::CartesianMesh mesh(-1.0, 1.0, 8);
  const hpdg::DofMap dofmap(mesh, p);
  for (auto _ : state) {
    auto system = hpdg::assemble(dofmap, bench_config());
    benchmark::DoNotOptimize(system.A);
  }
}
BENCHMARK(BM_Assemble)->Arg(2)->Arg(4);

void BM_PreconditionerBuild(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const hpdg::CartesianMesh mesh(-1.0, 1.0, 8);
  const hpdg::DofMap dofmap(mesh, p);
  const auto system = hpdg::assemble(dofmap, bench_config());
  for (auto _ : state) {
    hpdg::DGPreconditioner prec(dofmap, system);
    benchmark::DoNotOptimize(prec.dim());
  }
}
BENCHMARK(BM_PreconditionerBuild)->Arg(2)->Arg(4);

void BM_PreconditionerApply(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const hpdg::CartesianMesh mesh(-1.0, 1.0, 8);
  const hpdg::DofMap dofmap(mesh, p);
  const auto system = hpdg::assemble(dofmap, bench_config());
  const hpdg::DGPreconditioner prec(dofmap, system);
  hpdg::Vec r = hpdg::Vec::LinSpaced(dofmap.total_dofs(), -1.0, 1.0);
  hpdg::Vec out(r.size());
  for (auto _ : state) {
    prec.apply(r, out);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_PreconditionerApply)->Arg(2)->Arg(4);

void BM_PCGSolve(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const hpdg::CartesianMesh mesh(-1.0, 1.0, 8);
  const hpdg::DofMap dofmap(mesh, p);
  const auto system = hpdg::assemble(dofmap, bench_config());
  const hpdg::DGPreconditioner prec(dofmap, system);
  const auto a_op = hpdg::LinearOperator::from(system.A);
  const auto b_op = hpdg::LinearOperator::from(prec);
  for (auto _ : state) {
    auto sol = hpdg::pcg(a_op, &b_op, system.rhs, 1e-8, 10000);
    benchmark::DoNotOptimize(sol.x);
  }
}
BENCHMARK(BM_PCGSolve)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
