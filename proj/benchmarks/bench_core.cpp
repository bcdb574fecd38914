#include "kolmo/barrier.hpp"
#include "kolmo/dirichlet.hpp"
#include "kolmo/wiener.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace kolmo;

Vector v2(double a, double b) { return Vector{{a, b}}; }

void BM_GammaEval(benchmark::State& state) {
  const GammaContext ctx(OUOperator::kolmogorov());
  const Vector x = v2(0.4, -0.2);
  double t = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctx.gamma(x, t));
    t = t < 2.0 ? t + 1e-6 : 0.5;
  }
}
BENCHMARK(BM_GammaEval);

void BM_TransitionSample(benchmark::State& state) {
  const GammaContext ctx(OUOperator::heat(static_cast<int>(state.range(0))));
  const TransitionKernel k = ctx.transition_kernel(1e-3);
  Rng rng(1);
  Vector x = Vector::Zero(ctx.dim());
  for (auto _ : state) {
    x = GammaContext::transition_sample(k, x, rng);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_TransitionSample)->Arg(2)->Arg(3);

void BM_TransitionKernel(benchmark::State& state) {
  const GammaContext ctx(OUOperator::kolmogorov());
  double dt = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctx.transition_kernel(dt));
    dt = dt < 1e-2 ? dt * 1.01 : 1e-3;
  }
}
BENCHMARK(BM_TransitionKernel);

void BM_DkEstimate(benchmark::State& state) {
  const GammaContext ctx(OUOperator::kolmogorov());
  const Domain omega = box(v2(-1, -1), v2(1, 1));
  CriterionParams p;
  p.samples_per_k = state.range(0);
  p.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(dk_estimate(ctx, omega, v2(1, 0.2), p, 4));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DkEstimate)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_StationaryPaths(benchmark::State& state) {
  const GammaContext ctx(OUOperator::kolmogorov());
  const Domain omega = box(v2(-1, -1), v2(1, 1));
  SolverConfig cfg;
  cfg.paths = state.range(0);
  cfg.workers = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_stationary(ctx, omega, [](const Vector& y) { return y[0]; }, v2(0.2, 0.1), cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StationaryPaths)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BarrierOperator(benchmark::State& state) {
  const OUOperator op = OUOperator::kolmogorov();
  const BarrierH b = make_barrier(op, box(v2(-1, -1), v2(1, 1)), v2(0, 0));
  Vector x = v2(0.3, -0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_operator(b, op, x));
    x[0] = x[0] < 0.9 ? x[0] + 1e-6 : -0.9;
  }
}
BENCHMARK(BM_BarrierOperator);

}  // namespace

BENCHMARK_MAIN();
