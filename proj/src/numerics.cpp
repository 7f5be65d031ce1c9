#include "extinctlab/numerics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <string>

#include "extinctlab/error.hpp"

namespace extinctlab::num {

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = b;
  return out;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw InvalidInput("logspace: endpoints must be positive");
  }
  auto out = linspace(std::log(a), std::log(b), n);
  for (auto& x : out) x = std::exp(x);
  if (n > 0) {
    out.front() = a;
    out.back() = b;
  }
  return out;
}

double logsumexp(std::span<const double> xs) {
  double m = -kInf;
  for (double x : xs) m = std::max(m, x);
  if (m == -kInf) return -kInf;
  if (m == kInf) return kInf;
  double acc = 0.0;
  for (double x : xs) {
    if (x != -kInf) acc += std::exp(x - m);
  }
  return m + std::log(acc);
}

double logaddexp(double a, double b) {
  const double xs[] = {a, b};
  return logsumexp(xs);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double abs_tol, double rel_tol, unsigned max_iter) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (std::isnan(flo) || std::isnan(fhi)) {
    throw NumericError("bisect: NaN at bracket end");
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("bisect: no sign change on [" + std::to_string(lo) +
                       ", " + std::to_string(hi) + "]");
  }
  auto tol = [abs_tol, rel_tol](double a, double b) {
    return std::abs(b - a) <=
           abs_tol + rel_tol * std::max(std::abs(a), std::abs(b));
  };
  boost::uintmax_t iters = max_iter;
  auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

namespace {

// One 15-point Kronrod panel with the embedded Gauss error estimate.
Integral gk_panel(const std::function<double(double)>& f, double a, double b) {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
  // Boost reports the panel error on the reference interval [-1, 1].
  return {v, err * 0.5 * std::abs(b - a)};
}

Integral adapt(const std::function<double(double)>& f, double a, double b,
               const Integral& whole, double abs_tol, unsigned depth) {
  if (depth == 0 || whole.error <= abs_tol) return whole;
  const double mid = 0.5 * (a + b);
  const auto left = gk_panel(f, a, mid);
  const auto right = gk_panel(f, mid, b);
  const auto l = adapt(f, a, mid, left, 0.5 * abs_tol, depth - 1);
  const auto r = adapt(f, mid, b, right, 0.5 * abs_tol, depth - 1);
  return {l.value + r.value, l.error + r.error};
}

}  // namespace

Integral integrate(const std::function<double(double)>& f, double a, double b,
                   double rel_tol, unsigned max_depth) {
  if (a == b) return {};
  const auto first = gk_panel(f, a, b);
  if (std::isnan(first.value)) throw NumericError("integrate: NaN integrand");
  const double abs_tol = std::max(rel_tol * std::abs(first.value), 1e-300);
  const auto res = adapt(f, a, b, first, abs_tol, max_depth);
  if (std::isnan(res.value)) throw NumericError("integrate: NaN integrand");
  return res;
}

double ls_slope(std::span<const double> xs, std::span<const double> ys) {
  const auto n = static_cast<double>(xs.size());
  if (xs.size() < 2 || xs.size() != ys.size()) {
    throw InvalidInput("ls_slope: need at least two paired samples");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw InvalidInput("ls_slope: degenerate abscissae");
  return sxy / sxx;
}

double trapezoid(std::span<const double> xs, std::span<const double> ys) {
  double acc = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    acc += 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
  }
  return acc;
}

}  // namespace extinctlab::num
