#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "extinctlab/kernels.hpp"
#include "kernels_detail.hpp"

namespace extinctlab::kernels {

namespace {

constexpr std::size_t kBlock = 512;

// below this many blocks the thread start-up costs more than the loop
constexpr std::size_t kMinParallelBlocks = 8;

}  // namespace

int max_threads() { return omp_get_max_threads(); }

namespace omp {

void absorb(std::span<double> u, std::span<const double> a, double q, double dt) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static) if (n >= static_cast<std::ptrdiff_t>(kBlock * kMinParallelBlocks))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    u[i] = detail::absorb_one(u[i], a[i], q, dt);
  }
}

Moments moments(std::span<const double> u, std::span<const double> vol) {
  const std::size_t n = u.size();
  const std::size_t nb = (n + kBlock - 1) / kBlock;
  std::vector<Moments> part(nb);
#pragma omp parallel for schedule(static) if (nb >= kMinParallelBlocks)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
    Moments m;
    m.min = std::numeric_limits<double>::infinity();
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      m.mass += vol[i] * u[i];
      m.l2sq += vol[i] * u[i] * u[i];
      m.linf = std::max(m.linf, std::abs(u[i]));
      m.min = std::min(m.min, u[i]);
    }
    part[b] = m;
  }
  Moments out;
  out.min = std::numeric_limits<double>::infinity();
  for (const auto& m : part) {
    out.mass += m.mass;
    out.l2sq += m.l2sq;
    out.linf = std::max(out.linf, m.linf);
    out.min = std::min(out.min, m.min);
  }
  return out;
}


std::vector<EnergyRows> energy_rows_batch(const RadialGrid& g,
                                          const std::vector<std::vector<double>>& snaps,
                                          std::span<const double> a, double q,
                                          std::span<const double> taus) {
  std::vector<EnergyRows> out(snaps.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(snaps.size()); ++k) {
    out[k] = serial::energy_rows(g, snaps[k], a, q, taus);
  }
  return out;
}

}  // namespace omp

}  // namespace extinctlab::kernels
