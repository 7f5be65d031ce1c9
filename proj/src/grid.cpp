#include "extinctlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "extinctlab/error.hpp"

namespace extinctlab {

double sphere_area(int N) {
  switch (N) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw InvalidInput("dimension must be 1, 2 or 3");
  }
}

double RadialGrid::total_volume() const {
  return sphere_area(N) / N * std::pow(radius(), N);
}

double RadialGrid::area(double r) const {
  return N == 1 ? 2.0 : sphere_area(N) * std::pow(r, N - 1);
}

double RadialGrid::outer_volume(double r) const {
  const double R = radius();
  r = std::clamp(r, 0.0, R);
  return sphere_area(N) / N * (std::pow(R, N) - std::pow(r, N));
}

RadialGrid make_radial_grid_from_faces(int N, std::vector<double> faces) {
  sphere_area(N);  // validates N
  if (faces.size() < 3) throw InvalidInput("radial grid: need at least 2 cells");
  if (faces.front() != 0.0) throw InvalidInput("radial grid: first face must be 0");
  for (std::size_t i = 1; i < faces.size(); ++i) {
    if (!(faces[i] > faces[i - 1])) {
      throw InvalidInput("radial grid: faces must be strictly increasing");
    }
  }
  RadialGrid g;
  g.N = N;
  g.faces = std::move(faces);
  const std::size_t n = g.faces.size() - 1;
  const double sn = sphere_area(N) / N;
  g.centers.resize(n);
  g.volumes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.centers[i] = 0.5 * (g.faces[i] + g.faces[i + 1]);
    g.volumes[i] = sn * (std::pow(g.faces[i + 1], N) - std::pow(g.faces[i], N));
  }
  g.coupling.assign(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    g.coupling[i] = g.area(g.faces[i]) / (g.centers[i] - g.centers[i - 1]);
  }
  return g;
}

RadialGrid make_radial_grid(int N, double R, std::size_t n_cells) {
  if (!(R > 0.0)) throw InvalidInput("radial grid: R must be > 0");
  if (n_cells < 2) throw InvalidInput("radial grid: need at least 2 cells");
  std::vector<double> f(n_cells + 1);
  for (std::size_t i = 0; i <= n_cells; ++i) {
    f[i] = R * static_cast<double>(i) / static_cast<double>(n_cells);
  }
  f.back() = R;
  return make_radial_grid_from_faces(N, std::move(f));
}

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw InvalidInput("tridiagonal: size mismatch");
  }
  std::vector<double> c(n);
  double piv = diag[0];
  if (piv == 0.0 || !std::isfinite(piv)) throw NumericError("tridiagonal: zero pivot");
  c[0] = upper[0] / piv;
  rhs[0] /= piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = diag[i] - lower[i] * c[i - 1];
    if (piv == 0.0 || !std::isfinite(piv)) throw NumericError("tridiagonal: zero pivot");
    c[i] = upper[i] / piv;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / piv;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

}  // namespace extinctlab
