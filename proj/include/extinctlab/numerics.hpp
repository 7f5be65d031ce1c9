#pragma once

// Small numerical helpers shared by every module: grids, log-space sums,
// bracketed root finding and adaptive quadrature (Boost.Math underneath).

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace extinctlab::num {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> linspace(double a, double b, std::size_t n);
std::vector<double> logspace(double a, double b, std::size_t n);

/// ln(sum exp(x_i)), skipping -inf entries; -inf for an empty/all -inf input.
double logsumexp(std::span<const double> xs);
double logaddexp(double a, double b);

/// Root of a function with a sign change on [lo, hi] by bisection.
/// Stops once the bracket is narrower than abs_tol + rel_tol*|x|.
/// Throws BracketError when f(lo) and f(hi) have the same sign.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double abs_tol = 1e-12, double rel_tol = 0.0,
              unsigned max_iter = 200);

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive 15-point Gauss-Kronrod on a finite interval.
Integral integrate(const std::function<double(double)>& f, double a, double b,
                   double rel_tol = 1e-12, unsigned max_depth = 20);

/// Ordinary least-squares slope of ys against xs.
double ls_slope(std::span<const double> xs, std::span<const double> ys);

/// Trapezoid rule on a nonuniform grid.
double trapezoid(std::span<const double> xs, std::span<const double> ys);

}  // namespace extinctlab::num
