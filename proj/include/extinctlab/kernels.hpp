#pragma once

// Hot loops shared by the solver and the energy ledger. Each kernel has a
// plain serial reference and an OpenMP version; the OpenMP reductions add
// fixed-size blocks in index order, so the result does not depend on the
// thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "extinctlab/grid.hpp"

namespace extinctlab::kernels {

enum class Backend { serial, omp };

struct Moments {
  double mass = 0.0;  // int u dx
  double l2sq = 0.0;  // int u^2 dx
  double linf = 0.0;
  double min = 0.0;
};

/// Per-snapshot energy rows on a list of radii tau_j.
struct EnergyRows {
  std::vector<double> H;  // int_{|x|>tau} u^2
  std::vector<double> E;  // int_{|x|>tau} |grad u|^2 + a |u|^{q+1}
  std::vector<double> J;  // int_{|x|=tau} |grad u|^2
};

namespace serial {
/// u <- u / (1 + dt a |u|^{q-1}), leaving zeros in place.
void absorb(std::span<double> u, std::span<const double> a, double q, double dt);
Moments moments(std::span<const double> u, std::span<const double> vol);
/// One pass over every cell per radius; the reference for energy_rows.
EnergyRows energy_rows_direct(const RadialGrid& g, std::span<const double> u,
                              std::span<const double> a, double q,
                              std::span<const double> taus);
/// Suffix sums, then one lookup per radius.
EnergyRows energy_rows(const RadialGrid& g, std::span<const double> u,
                       std::span<const double> a, double q,
                       std::span<const double> taus);
}  // namespace serial

namespace omp {
void absorb(std::span<double> u, std::span<const double> a, double q, double dt);
Moments moments(std::span<const double> u, std::span<const double> vol);
/// Rows for many snapshots at once, parallel over snapshots.
std::vector<EnergyRows> energy_rows_batch(const RadialGrid& g,
                                          const std::vector<std::vector<double>>& snaps,
                                          std::span<const double> a, double q,
                                          std::span<const double> taus);
}  // namespace omp

std::vector<EnergyRows> energy_rows_batch(Backend b, const RadialGrid& g,
                                          const std::vector<std::vector<double>>& snaps,
                                          std::span<const double> a, double q,
                                          std::span<const double> taus);

void absorb(Backend b, std::span<double> u, std::span<const double> a, double q, double dt);
Moments moments(Backend b, std::span<const double> u, std::span<const double> vol);

/// Number of worker threads OpenMP would use.
int max_threads();

}  // namespace extinctlab::kernels
