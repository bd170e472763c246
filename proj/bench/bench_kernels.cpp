// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS to vary threads.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "hk/kernels.hpp"
#include "hk/spectral.hpp"
#include "hk/sweep.hpp"

namespace {

std::vector<double> positions(std::size_t n) {
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = u(g);
  return x;
}

template <hk::kernels::Exec E>
void BM_drift(benchmark::State& st) {
  const auto x = positions(static_cast<std::size_t>(st.range(0)));
  std::vector<double> out(x.size());
  for (auto _ : st) {
    hk::kernels::drift(E, x, 0.1, 1.0, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(0));
}

template <hk::kernels::Exec E>
void BM_pair_count(benchmark::State& st) {
  const auto x = positions(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(hk::kernels::pair_count(E, x, 0.1, 1.0));
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(0));
}

void BM_pde_step(benchmark::State& st) {
  hk::ModelParams p;
  p.R = 0.1;
  p.sigma = 0.02;
  const hk::pde::SpectralSolver solver(p, {});
  auto s = hk::pde::make_initial(solver, hk::pde::initial_profile("uniform-plus-noise(0.01, 1)", 512));
  for (auto _ : st) solver.step_in_place(s);
}

void BM_sweep(benchmark::State& st) {
  hk::sweep::SweepSpec s;
  s.base.N = 100;
  s.T = 20.0;
  s.R_values = {0.05, 0.1, 0.2};
  s.sigma_values = {0.01, 0.05, 0.1};
  for (auto _ : st) benchmark::DoNotOptimize(hk::sweep::run_sweep(s, static_cast<int>(st.range(0))).rows.size());
}

using hk::kernels::Exec;
BENCHMARK(BM_drift<Exec::serial>)->RangeMultiplier(4)->Range(128, 8192);
BENCHMARK(BM_drift<Exec::parallel>)->RangeMultiplier(4)->Range(128, 8192)->UseRealTime();
BENCHMARK(BM_pair_count<Exec::serial>)->RangeMultiplier(4)->Range(128, 8192);
BENCHMARK(BM_pair_count<Exec::parallel>)->RangeMultiplier(4)->Range(128, 8192)->UseRealTime();
BENCHMARK(BM_pde_step);
BENCHMARK(BM_sweep)->Arg(1)->Arg(0)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
