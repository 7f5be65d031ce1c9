// Straightforward reference loops. Kept simple on purpose: the tests compare
// the OpenMP kernels against these.

#include <algorithm>
#include <cmath>
#include <limits>

#include "extinctlab/error.hpp"
#include "extinctlab/kernels.hpp"
#include "kernels_detail.hpp"

namespace extinctlab::kernels {

namespace detail {

double absorb_one(double u, double a, double q, double dt) {
  if (u == 0.0 || a == 0.0) return u;
  return u / (1.0 + dt * a * std::pow(std::abs(u), q - 1.0));
}

// Volume of cell [lo, hi] lying beyond radius tau.
double outer_part(int N, double lo, double hi, double tau) {
  if (tau >= hi) return 0.0;
  const double from = std::max(lo, tau);
  return sphere_area(N) / N * (std::pow(hi, N) - std::pow(from, N));
}

// Face gradient interpolated to radius tau, with zero slope at 0 and R.
double gradient_at(const RadialGrid& g, std::span<const double> u, double tau) {
  const std::size_t n = g.size();
  // gradient samples at faces 0..n: zero at both ends
  auto grad = [&](std::size_t i) {
    if (i == 0 || i == n) return 0.0;
    return (u[i] - u[i - 1]) / (g.centers[i] - g.centers[i - 1]);
  };
  tau = std::clamp(tau, 0.0, g.radius());
  auto it = std::upper_bound(g.faces.begin(), g.faces.end(), tau);
  std::size_t k = static_cast<std::size_t>(it - g.faces.begin());
  if (k == 0) k = 1;
  if (k > n) k = n;
  const double f0 = g.faces[k - 1], f1 = g.faces[k];
  const double w = (tau - f0) / (f1 - f0);
  return (1.0 - w) * grad(k - 1) + w * grad(k);
}

}  // namespace detail

namespace serial {

void absorb(std::span<double> u, std::span<const double> a, double q, double dt) {
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = detail::absorb_one(u[i], a[i], q, dt);
}

Moments moments(std::span<const double> u, std::span<const double> vol) {
  Moments m;
  m.min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    m.mass += vol[i] * u[i];
    m.l2sq += vol[i] * u[i] * u[i];
    m.linf = std::max(m.linf, std::abs(u[i]));
    m.min = std::min(m.min, u[i]);
  }
  return m;
}

EnergyRows energy_rows_direct(const RadialGrid& g, std::span<const double> u,
                              std::span<const double> a, double q,
                              std::span<const double> taus) {
  const std::size_t n = g.size();
  EnergyRows rows;
  rows.H.resize(taus.size());
  rows.E.resize(taus.size());
  rows.J.resize(taus.size());
  for (std::size_t j = 0; j < taus.size(); ++j) {
    const double tau = taus[j];
    double h = 0.0, e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = detail::outer_part(g.N, g.faces[i], g.faces[i + 1], tau);
      h += v * u[i] * u[i];
      e += v * a[i] * std::pow(std::abs(u[i]), q + 1.0);
    }
    for (std::size_t i = 1; i < n; ++i) {
      const double lo = g.centers[i - 1], hi = g.centers[i];
      const double frac = std::clamp((hi - tau) / (hi - lo), 0.0, 1.0);
      const double du = u[i] - u[i - 1];
      e += frac * g.coupling[i] * du * du;
    }
    const double gr = detail::gradient_at(g, u, tau);
    rows.H[j] = h;
    rows.E[j] = e;
    rows.J[j] = g.area(tau) * gr * gr;
  }
  return rows;
}

// Suffix sums over cells and dual cells, then one lookup per tau.
EnergyRows energy_rows(const RadialGrid& g, std::span<const double> u,
                       std::span<const double> a, double q,
                       std::span<const double> taus) {
  const std::size_t n = g.size();
  std::vector<double> h_suf(n + 1, 0.0), p_suf(n + 1, 0.0), k_suf(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    h_suf[i] = h_suf[i + 1] + g.volumes[i] * u[i] * u[i];
    p_suf[i] = p_suf[i + 1] + g.volumes[i] * a[i] * std::pow(std::abs(u[i]), q + 1.0);
  }
  // k_suf[i]: gradient energy on dual cells i..n-1 (dual cell i spans c_{i-1}..c_i)
  for (std::size_t i = n - 1; i >= 1; --i) {
    const double du = u[i] - u[i - 1];
    k_suf[i] = k_suf[i + 1] + g.coupling[i] * du * du;
  }
  EnergyRows rows;
  rows.H.resize(taus.size());
  rows.E.resize(taus.size());
  rows.J.resize(taus.size());
  for (std::size_t j = 0; j < taus.size(); ++j) {
    const double tau = taus[j];
    // cell containing tau
    auto it = std::upper_bound(g.faces.begin(), g.faces.end(), tau);
    std::size_t c = it == g.faces.begin() ? 0 : static_cast<std::size_t>(it - g.faces.begin()) - 1;
    double h = 0.0, p = 0.0;
    if (c < n) {
      const double v = detail::outer_part(g.N, g.faces[c], g.faces[c + 1], tau);
      h = h_suf[c + 1] + v * u[c] * u[c];
      p = p_suf[c + 1] + v * a[c] * std::pow(std::abs(u[c]), q + 1.0);
    }
    // dual cell containing tau
    auto jt = std::upper_bound(g.centers.begin(), g.centers.end(), tau);
    std::size_t d = static_cast<std::size_t>(jt - g.centers.begin());
    double k = 0.0;
    if (d == 0) {
      k = k_suf[1];
    } else if (d < n) {
      const double lo = g.centers[d - 1], hi = g.centers[d];
      const double du = u[d] - u[d - 1];
      k = k_suf[d + 1] + (hi - tau) / (hi - lo) * g.coupling[d] * du * du;
    }
    const double gr = detail::gradient_at(g, u, tau);
    rows.H[j] = h;
    rows.E[j] = p + k;
    rows.J[j] = g.area(tau) * gr * gr;
  }
  return rows;
}

}  // namespace serial

std::vector<EnergyRows> energy_rows_batch(Backend b, const RadialGrid& g,
                                          const std::vector<std::vector<double>>& snaps,
                                          std::span<const double> a, double q,
                                          std::span<const double> taus) {
  if (b == Backend::omp) return omp::energy_rows_batch(g, snaps, a, q, taus);
  std::vector<EnergyRows> out;
  out.reserve(snaps.size());
  for (const auto& s : snaps) out.push_back(serial::energy_rows(g, s, a, q, taus));
  return out;
}

void absorb(Backend b, std::span<double> u, std::span<const double> a, double q, double dt) {
  if (b == Backend::omp) {
    omp::absorb(u, a, q, dt);
  } else {
    serial::absorb(u, a, q, dt);
  }
}

Moments moments(Backend b, std::span<const double> u, std::span<const double> vol) {
  return b == Backend::omp ? omp::moments(u, vol) : serial::moments(u, vol);
}

}  // namespace extinctlab::kernels
