// Serial reference against OpenMP variants of the inner loops, plus one
// full evolution step on the standard grid.
#include <benchmark/benchmark.h>

#include <cmath>

#include "twosol/evolver.hpp"
#include "twosol/kernels.hpp"
#include "twosol/soliton.hpp"

using namespace twosol;

namespace {

std::vector<cplx> field(std::size_t n) {
  std::vector<cplx> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = -60.0 + 120.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    u[i] = std::polar(q_profile(x - 8.0, 3.0) + q_profile(x + 8.0, 3.0), 0.1 * x);
  }
  return u;
}

template <void (*Phase)(std::span<cplx>, double, double)>
void BM_nonlinear_phase(benchmark::State& st) {
  auto u = field(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    Phase(u, 3.0, 1e-3);
    benchmark::DoNotOptimize(u.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <cplx (*Dot)(std::span<const cplx>, std::span<const cplx>)>
void BM_conj_dot(benchmark::State& st) {
  const auto u = field(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(Dot(u, u));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <double (*Sum)(std::span<const cplx>, double)>
void BM_abs_pow_sum(benchmark::State& st) {
  const auto u = field(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(Sum(u, 4.0));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_evolver_step(benchmark::State& st) {
  const Grid1D g = Grid1D::standard();
  EvolverConfig cfg;
  cfg.params = {3.0, 1.0};
  const Evolver ev(g, cfg);
  WaveField u = approx_two_soliton(g, 16.0, 0.0, 3.0);
  for (auto _ : st) ev.step(u);
}

}  // namespace

BENCHMARK(BM_nonlinear_phase<kernels::serial::nonlinear_phase>)->Name("nonlinear_phase/serial")->Arg(6001)->Arg(96001);
BENCHMARK(BM_nonlinear_phase<kernels::omp::nonlinear_phase>)->Name("nonlinear_phase/omp")->Arg(6001)->Arg(96001);
BENCHMARK(BM_conj_dot<kernels::serial::conj_dot>)->Name("conj_dot/serial")->Arg(6001)->Arg(96001);
BENCHMARK(BM_conj_dot<kernels::omp::conj_dot>)->Name("conj_dot/omp")->Arg(6001)->Arg(96001);
BENCHMARK(BM_abs_pow_sum<kernels::serial::abs_pow_sum>)->Name("abs_pow_sum/serial")->Arg(6001)->Arg(96001);
BENCHMARK(BM_abs_pow_sum<kernels::omp::abs_pow_sum>)->Name("abs_pow_sum/omp")->Arg(6001)->Arg(96001);
BENCHMARK(BM_evolver_step)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
