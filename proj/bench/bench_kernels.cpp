// Serial vs OpenMP kernels, and the FFT shortcuts against their direct sums.
//   ./bench_kernels --benchmark_filter=windowed

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "wpk/kernels.hpp"
#include "wpk/windows.hpp"

using namespace wpk;

namespace {

struct Setup {
  Grid grid;
  std::vector<cplx> f;
  Window w;
  std::vector<double> xs, xis;

  explicit Setup(std::size_t n)
      : grid(Grid::make(1, n, 16.0)), w(Window::gaussian({0.25, 16.0, 0.0, 1})) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.coord(j);
      f.push_back(std::polar(std::exp(-x * x / 2), 3.0 * x));
    }
    for (int i = 0; i < 64; ++i) xs.push_back(-4.0 + i / 8.0);
    for (int k = 0; k < 64; ++k) xis.push_back(-20.0 + k * 0.625);
  }
};

template <Exec E>
void BM_windowed_sums(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  std::vector<cplx> out(s.xs.size() * s.xis.size());
  for (auto _ : state) {
    if constexpr (E == Exec::Serial) kernels::windowed_sums_serial(s.grid, s.f, s.w, s.xs, s.xis, out);
    else kernels::windowed_sums_parallel(s.grid, s.f, s.w, s.xs, s.xis, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <Exec E>
void BM_lattice_wpt(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  std::vector<cplx> out(s.f.size() * s.f.size());
  for (auto _ : state) {
    if constexpr (E == Exec::Serial) kernels::lattice_wpt_serial(s.grid, s.f, s.w, out);
    else kernels::lattice_wpt_parallel(s.grid, s.f, s.w, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_correlation_wpt(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  std::vector<cplx> out(s.f.size());
  for (auto _ : state) {
    kernels::correlation_wpt(s.grid, s.f, s.w, 5.0, 0.0, out);
    benchmark::DoNotOptimize(out.data());
  }
}

// every x on the grid at one xi, via direct sums; compare with correlation_wpt
void BM_correlation_direct(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  std::vector<double> xs;
  for (std::size_t j = 0; j < s.f.size(); ++j) xs.push_back(s.grid.coord(j));
  const std::vector<double> xi = {5.0};
  std::vector<cplx> out(xs.size());
  for (auto _ : state) {
    kernels::windowed_sums_parallel(s.grid, s.f, s.w, xs, xi, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Fft>
void BM_cyclic_convolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a(n * n), b(n * n), out(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    a[i] = std::sin(0.1 * i);
    b[i] = (i % 7 == 0) ? 1.0 : 0.0;
  }
  for (auto _ : state) {
    if constexpr (Fft) kernels::cyclic_convolve_fft(n, a, b, out);
    else kernels::cyclic_convolve_serial(n, a, b, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_windowed_sums<Exec::Serial>)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_windowed_sums<Exec::Parallel>)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_lattice_wpt<Exec::Serial>)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_lattice_wpt<Exec::Parallel>)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_correlation_wpt)->Arg(1024)->Arg(8192)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_correlation_direct)->Arg(1024)->Arg(8192)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_cyclic_convolve<false>)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cyclic_convolve<true>)->Arg(32)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
