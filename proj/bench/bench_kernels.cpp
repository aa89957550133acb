// Serial reference vs OpenMP path for the heavy kernels. Threads follow
// OMP_NUM_THREADS / CKN_THREADS.
#include <benchmark/benchmark.h>

#include <cmath>

#include "ckn/optimizers.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/spectral.hpp"

using namespace ckn;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_IntegrateS(benchmark::State& state) {
  const CknParams p{MonomialWeight({1, 0, 0}), -0.2, 0.3};
  const DerivedParams dp = derive(p);
  QuadratureOptions o;
  o.initial_nodes = 128;
  o.execution = mode(state);
  const WarpedFunction F = [](double y, std::span<const double> t) { return std::exp(y * t[2]) * (1 + t[0] * t[1]); };
  for (auto _ : state) benchmark::DoNotOptimize(integrate_S(F, dp, p.weight, o));
}

void BM_CknSides(benchmark::State& state) {
  const CknParams p{MonomialWeight({1, 0}), 0, 0.5};
  const DerivedParams dp = derive(p);
  const ModelS S(p, dp);
  SplitMix64 rng(1);
  const PerturbedOptimizer F = PerturbedOptimizer::random(rng, OptimizerS(1.5, 0.5, dp), 2);
  const AmbientFunction f = [&](std::span<const Jet> v) { return F(v); };
  QuadratureOptions o;
  o.initial_nodes = 64;
  o.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(ckn_sides(S, f, o).ratio);
}

void BM_PhaseScan(benchmark::State& state) {
  SpectralOptions so;
  so.execution = mode(state);
  QuadratureOptions q;
  q.initial_nodes = 16;
  q.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(phase_scan(MonomialWeight({1, 0}), ScanGrid{}, 4, so, q).size());
}

}  // namespace

BENCHMARK(BM_IntegrateS)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CknSides)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PhaseScan)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
