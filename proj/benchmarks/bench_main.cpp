#include <benchmark/benchmark.h>

#include "tvtomo/experiment.hpp"
#include "tvtomo/objective.hpp"
#include "tvtomo/solvers.hpp"
#include "tvtomo/tomo.hpp"
#include "tvtomo/tv.hpp"

namespace {

using namespace tvtomo;

const tomo::TestProblem& desk_problem() {
  static const tomo::TestProblem tp = [] {
    auto spec = *tomo::preset("T2-desk");
    return tomo::make_test_problem(spec);
  }();
  return tp;
}

void BM_spmv(benchmark::State& state) {
  const auto& tp = desk_problem();
  const DenseVector x(tp.a.cols(), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(spmv(tp.a, x));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(tp.a.nnz()));
}
BENCHMARK(BM_spmv);

void BM_spmv_t(benchmark::State& state) {
  const auto& tp = desk_problem();
  const DenseVector y(tp.a.rows(), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(spmv_t(tp.a, y));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(tp.a.nnz()));
}
BENCHMARK(BM_spmv_t);

void BM_apply_D(benchmark::State& state) {
  const auto& tp = desk_problem();
  const DiffOperator d(tp.spec.m, tp.spec.n, tp.spec.l);
  for (auto _ : state) benchmark::DoNotOptimize(apply_D(d, tp.x_exact.data));
}
BENCHMARK(BM_apply_D);

void BM_tv_value_grad(benchmark::State& state) {
  const auto& tp = desk_problem();
  const DiffOperator d(tp.spec.m, tp.spec.n, tp.spec.l);
  for (auto _ : state) benchmark::DoNotOptimize(tv_value_grad(d, tp.x_exact.data, 1e-4));
}
BENCHMARK(BM_tv_value_grad);

void BM_phi_value_grad(benchmark::State& state) {
  const auto& tp = desk_problem();
  const TvRegProblem p = tomo::make_tvreg_problem(tp, 1.0, 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(phi_value_grad(p, tp.x0));
}
BENCHMARK(BM_phi_value_grad);

void BM_bt_step(benchmark::State& state) {
  const auto& tp = desk_problem();
  const TvRegProblem p = tomo::make_tvreg_problem(tp, 1.0, 1e-4);
  const TvRegObjective obj(p);
  const SolverConfig cfg = bench::default_solver_config(p, 0);
  for (auto _ : state) benchmark::DoNotOptimize(bt_step(obj, tp.x0, cfg.L_init, cfg.rho_L));
}
BENCHMARK(BM_bt_step);

void BM_build_system_matrix(benchmark::State& state) {
  const auto g = tomo::make_geometry(13, 31);
  for (auto _ : state) benchmark::DoNotOptimize(tomo::build_system_matrix(g, 21, 21, 21));
}
BENCHMARK(BM_build_system_matrix);

void BM_upn_iteration(benchmark::State& state) {
  const auto& tp = desk_problem();
  const TvRegProblem p = tomo::make_tvreg_problem(tp, 1.0, 1e-4);
  const TvRegObjective obj(p);
  SolverConfig cfg = bench::default_solver_config(p, 0);
  cfg.algorithm = Algorithm::Upn;
  cfg.eps_bar = 1e-12;  // unreachable: measure a fixed iteration count
  cfg.max_iters = 20;
  for (auto _ : state) benchmark::DoNotOptimize(upn_solve(obj, cfg, tp.x0));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * 20);
}
BENCHMARK(BM_upn_iteration);

}  // namespace

BENCHMARK_MAIN();
