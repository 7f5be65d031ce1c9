#pragma once

// Cell-centred radial grids on the ball B_R in R^N (N = 1, 2, 3) and the
// symmetric three-point operator that goes with them.

#include <cstddef>
#include <span>
#include <vector>

namespace extinctlab {

/// Surface measure of the unit sphere in R^N (2, 2 pi, 4 pi).
double sphere_area(int N);

/// Cells [f_i, f_{i+1}] with centres c_i. Volumes are exact shell volumes,
/// so their sum equals |B_R|.
struct RadialGrid {
  int N = 1;
  std::vector<double> faces;    // n + 1 values, faces[0] = 0, faces[n] = R
  std::vector<double> centers;  // n values
  std::vector<double> volumes;  // n values
  /// Coupling between cells i-1 and i across face i: area(f_i)/(c_i - c_{i-1}).
  /// coupling[0] and coupling[n] are zero (symmetry at 0, Neumann at R).
  std::vector<double> coupling;

  std::size_t size() const { return centers.size(); }
  double radius() const { return faces.back(); }
  double total_volume() const;
  /// Area of the sphere |x| = r.
  double area(double r) const;
  /// Volume of {x in B_R : |x| > r}.
  double outer_volume(double r) const;
};

RadialGrid make_radial_grid(int N, double R, std::size_t n_cells);
RadialGrid make_radial_grid_from_faces(int N, std::vector<double> faces);

/// Solves the tridiagonal system lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]
/// in place (rhs becomes x). Throws NumericError on a zero pivot.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

}  // namespace extinctlab
