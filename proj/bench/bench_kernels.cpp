// Serial against OpenMP for the data-parallel kernels and the mu_n scan.
// The tridiagonal solve inside each step has no parallel variant.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "extinctlab/grid.hpp"
#include "extinctlab/kernels.hpp"
#include "extinctlab/numerics.hpp"
#include "extinctlab/spectral.hpp"

using namespace extinctlab;

namespace {

kernels::Backend backend_of(const benchmark::State& st) {
  return st.range(1) ? kernels::Backend::omp : kernels::Backend::serial;
}

std::vector<double> bump(const RadialGrid& g) {
  std::vector<double> u(g.centers.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 + std::cos(3.0 * g.centers[i]);
  return u;
}

void BM_absorb(benchmark::State& st) {
  const auto g = make_radial_grid(1, 1.0, static_cast<std::size_t>(st.range(0)));
  const auto u0 = bump(g);
  std::vector<double> a(u0.size(), 0.7);
  const auto b = backend_of(st);
  for (auto _ : st) {
    auto u = u0;
    kernels::absorb(b, u, a, 0.5, 1e-4);
    benchmark::DoNotOptimize(u.data());
  }
}

void BM_moments(benchmark::State& st) {
  const auto g = make_radial_grid(3, 1.0, static_cast<std::size_t>(st.range(0)));
  const auto u = bump(g);
  const auto b = backend_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::moments(b, u, g.volumes));
}

void BM_energy_rows(benchmark::State& st) {
  const auto g = make_radial_grid(1, 1.0, static_cast<std::size_t>(st.range(0)));
  std::vector<std::vector<double>> snaps(64, bump(g));
  std::vector<double> a(g.centers.size(), 0.7);
  const auto taus = num::linspace(0.0, 1.0, 41);
  const auto b = backend_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::energy_rows_batch(b, g, snaps, a, 0.5, taus));
}

void BM_mu_n(benchmark::State& st) {
  const auto pot = RadialPotential::profile(PotentialField(1.0, OmegaProfile::power(1.0)));
  SpectralOptions opts;
  opts.cells = static_cast<std::size_t>(st.range(0));
  opts.backend = backend_of(st);
  for (auto _ : st) benchmark::DoNotOptimize(mu_n_sequence(pot, 30, opts));
}

}  // namespace

BENCHMARK(BM_absorb)->ArgsProduct({{1 << 12, 1 << 16, 1 << 20}, {0, 1}});
BENCHMARK(BM_moments)->ArgsProduct({{1 << 12, 1 << 16, 1 << 20}, {0, 1}});
BENCHMARK(BM_energy_rows)->ArgsProduct({{1 << 10, 1 << 13}, {0, 1}});
BENCHMARK(BM_mu_n)->ArgsProduct({{400, 1600}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
