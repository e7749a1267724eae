#include <benchmark/benchmark.h>

#include "clipopt/biasvar.hpp"
#include "clipopt/noise.hpp"
#include "clipopt/problems.hpp"
#include "clipopt/prox.hpp"
#include "clipopt/rng.hpp"
#include "clipopt/solver.hpp"

namespace {

using namespace clipopt;

void BM_clip_inf(benchmark::State& state) {
  const auto n = Eigen::Index(state.range(0));
  RngStream rng(1);
  Vector g(n);
  for (Eigen::Index i = 0; i < n; ++i) g(i) = 20.0 * rng.uniform01() - 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(clip_inf(g, 5.0));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_clip_inf)->Arg(100)->Arg(10000);

void BM_prox_box_l1(benchmark::State& state) {
  const auto n = Eigen::Index(state.range(0));
  BoxL1Regularizer reg = BoxL1Regularizer::symmetric_box(0.5, int(n), 1.0);
  RngStream rng(2);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = 6.0 * rng.uniform01() - 3.0;
  for (auto _ : state) benchmark::DoNotOptimize(prox_box_l1(x, 0.1, reg));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_prox_box_l1)->Arg(100)->Arg(10000);

void BM_pareto_sample(benchmark::State& state) {
  const NoiseModel model = NoiseModel::pareto_sym(1.5);
  RngStream rng(3);
  double acc = 0.0;
  for (auto _ : state) acc += model.sample(rng);
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_pareto_sample);

void BM_biasvar_estimate(benchmark::State& state) {
  const NoiseModel model = NoiseModel::pareto_sym(0.5);
  for (auto _ : state) {
    RngStream rng(4);
    benchmark::DoNotOptimize(
        estimate_bias_variance(model, 1.0, 10.0, state.range(0), rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_biasvar_estimate)->Arg(10000);

// One prox step of the averaged method on the default-size lasso instance:
// oracle draw, clip, prox. The iteration cost the K bounds multiply.
void BM_spgm_step(benchmark::State& state) {
  auto problem = make_lasso_box(200, 100, 1.0, 100.0, 5);
  NoisyGradientOracle oracle(*problem, NoiseModel::pareto_sym(1.5), RngStream(6));
  const BoxL1Regularizer& reg = problem->reg();
  Vector x = project_box(Vector::Zero(100), reg.lower(), reg.upper());
  for (auto _ : state) {
    const Vector gc = clip_inf(oracle.sample_gradient(x), 10.0);
    x = prox_box_l1(x - 1e-3 * gc, 1e-3, reg);
  }
  benchmark::DoNotOptimize(x);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_spgm_step);

void BM_spgm_run(benchmark::State& state) {
  auto problem = make_quad_box(100, 1.0, 0.0, 100.0, 7);
  SolverConfig cfg;
  cfg.K = state.range(0);
  cfg.step = StepPlan::constant(1e-2);
  cfg.clip = ClipPlan::constant(10.0);
  for (auto _ : state) {
    NoisyGradientOracle oracle(*problem, NoiseModel::pareto_sym(1.5), RngStream(8));
    benchmark::DoNotOptimize(run_spgm(*problem, oracle, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_spgm_run)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
