#include "extinctlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "extinctlab/error.hpp"
#include "extinctlab/numerics.hpp"

namespace extinctlab {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::convergent: return "convergent";
    case Verdict::divergent: return "divergent";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict slope_verdict(double slope) {
  if (std::isnan(slope)) return Verdict::inconclusive;
  if (slope < kSlopeConvergent) return Verdict::convergent;
  if (slope > kSlopeDivergent) return Verdict::divergent;
  return Verdict::inconclusive;
}

QuadratureResult dini_integral(const OmegaProfile& omega, double c, double tol,
                               const DiniOptions& opts) {
  if (!(c > 0.0)) throw InvalidInput("dini_integral: c must be > 0");
  if (!(tol > 0.0)) throw InvalidInput("dini_integral: tol must be > 0");
  const double log_c = std::log(c);
  auto f = [&](double u) {
    const double v = omega.value_at_log(log_c - u);
    if (std::isnan(v) || v < 0.0) {
      throw DomainError("dini_integral: omega undefined at ln s = " +
                        std::to_string(log_c - u));
    }
    return v;
  };

  QuadratureResult res;
  double err = 0.0;
  double lo = 0.0, hi = 1.0;
  for (std::size_t j = 0; j <= opts.max_windows; ++j) {
    const auto w = num::integrate(f, lo, hi, 1e-13, 15);
    if (std::isinf(w.value)) {
      res.windows.push_back(w.value);
      break;
    }
    res.windows.push_back(w.value);
    err += w.error;
    ++res.subdivisions;
    lo = hi;
    hi *= 2.0;
  }

  double sum = 0.0;
  for (double w : res.windows) sum += w;
  res.value = sum;
  res.error = err;

  const auto& W = res.windows;
  if (std::isinf(W.back())) {
    res.verdict = Verdict::divergent;
    return res;
  }
  std::vector<double> ratios;
  for (std::size_t j = 1; j < W.size(); ++j) {
    if (W[j - 1] > 0.0) {
      ratios.push_back(W[j] / W[j - 1]);
    } else {
      ratios.push_back(W[j] > 0.0 ? num::kInf : 0.0);
    }
  }
  if (ratios.size() < opts.run) return res;
  const auto last = std::span<const double>(ratios).last(opts.run);
  const double r_max = *std::max_element(last.begin(), last.end());
  const double r_min = *std::min_element(last.begin(), last.end());

  if (r_max <= opts.decay_ratio) {
    // remaining windows bounded by a geometric series with the worst ratio
    res.tail = W.back() * r_max / (1.0 - r_max);
    res.value = sum + res.tail;
    res.error = err + res.tail;
    const double scale = std::max(1.0, std::abs(res.value));
    res.verdict = res.error <= tol * scale ? Verdict::convergent : Verdict::inconclusive;
  } else if (r_min >= opts.flat_ratio && sum >= opts.blowup_factor * W.front()) {
    res.verdict = Verdict::divergent;
    res.value = num::kInf;
  }
  return res;
}

namespace {

// Slope of g(x) against x = ln(index) over the last decade [ln K - ln 10, ln K].
double fit_slope(const std::function<double(double)>& g, double K,
                 std::size_t samples, bool& zero_tail) {
  const auto xs = num::linspace(std::log(K / 10.0), std::log(K), samples);
  std::vector<double> ys(xs.size());
  zero_tail = false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ys[i] = g(xs[i]);
    if (ys[i] == -num::kInf) zero_tail = true;
    if (std::isnan(ys[i])) return std::nan("");
  }
  if (zero_tail) return -num::kInf;
  return num::ls_slope(xs, ys);
}

}  // namespace

SeriesDiagnosis condensed_diagnosis(const std::function<double(double)>& log_na) {
  SeriesDiagnosis d;
  std::function<double(double)> g = [log_na](double x) { return log_na(std::exp(x) * kLn2); };
  for (int level = 1; level <= 2; ++level) {
    if (level == 2) {
      auto prev = g;
      g = [prev](double x) {
        const double k = std::exp(x);
        return k * kLn2 + prev(k * kLn2);
      };
    }
    bool zero_tail = false;
    const double slope = fit_slope(g, 1000.0, 200, zero_tail);
    d.condensation_level = level;
    d.fitted_exponent = slope;
    d.verdict = zero_tail ? Verdict::convergent : slope_verdict(slope);
    if (d.verdict != Verdict::inconclusive) break;
  }
  return d;
}

SeriesDiagnosis dini_series(const OmegaProfile& omega, std::size_t n0,
                            std::size_t n_max) {
  if (n0 < 2) throw InvalidInput("dini_series: n0 must be >= 2");
  if (n_max < n0) throw InvalidInput("dini_series: n_max below n0");

  // ln of the n-th term as a function of L = ln n
  auto g0 = [&](double L) {
    const double t = -0.5 * (L + std::log(L));
    return omega.log_value_at_log(t) - L;
  };

  SeriesDiagnosis d;
  double acc = 0.0;
  std::size_t next_mark = std::max<std::size_t>(n0, 10);
  for (std::size_t n = n0; n <= n_max; ++n) {
    const double L = std::log(static_cast<double>(n));
    const double lt = g0(L);
    if (std::isnan(lt)) throw DomainError("dini_series: NaN term");
    acc += std::exp(lt);
    if (n == next_mark || n == n_max) {
      d.indices.push_back(n);
      d.partial_sums.push_back(acc);
      next_mark *= 10;
    }
  }

  // Cauchy condensation. ln(2^k a(2^k)) = ln(n a_n) at n = 2^k; the factor n
  // cancels exactly, which matters once ln n reaches 1e300.
  const auto c = condensed_diagnosis(
      [&](double L) { return omega.log_value_at_log(-0.5 * (L + std::log(L))); });
  d.condensation_level = c.condensation_level;
  d.fitted_exponent = c.fitted_exponent;
  d.verdict = c.verdict;
  return d;
}

SeriesDiagnosis diagnose_log_terms(std::span<const double> indices,
                                   std::span<const double> log_terms) {
  if (indices.size() != log_terms.size()) {
    throw InvalidInput("diagnose_log_terms: length mismatch");
  }
  SeriesDiagnosis d;
  double acc = 0.0;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    acc += std::exp(log_terms[i]);
    d.indices.push_back(static_cast<std::size_t>(indices[i]));
    d.partial_sums.push_back(acc);
  }
  if (indices.empty()) {
    d.warnings.push_back("empty sequence");
    return d;
  }
  const double top = indices.back();
  std::vector<double> xs, ys;
  bool zero_tail = true;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < top / 10.0) continue;
    if (log_terms[i] == -num::kInf) continue;
    zero_tail = false;
    xs.push_back(std::log(indices[i]));
    ys.push_back(log_terms[i]);
  }
  if (zero_tail) {
    d.verdict = Verdict::convergent;
    d.fitted_exponent = -num::kInf;
    return d;
  }
  if (xs.size() < 3) {
    d.warnings.push_back("fewer than 3 terms in the last decade");
    return d;
  }
  d.fitted_exponent = num::ls_slope(xs, ys);
  d.verdict = slope_verdict(d.fitted_exponent);
  return d;
}

SeriesDiagnosis kv_partial_sum_log(std::span<const double> log_mu_values) {
  std::vector<double> idx, lt;
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < log_mu_values.size(); ++i) {
    const double lm = log_mu_values[i];
    if (!(lm > 0.0)) {
      std::ostringstream os;
      os << "mu_" << i + 1 << " <= 1 rejected";
      warnings.push_back(os.str());
      continue;
    }
    idx.push_back(static_cast<double>(i + 1));
    lt.push_back(std::log(lm) - lm);
  }
  auto d = diagnose_log_terms(idx, lt);
  d.warnings.insert(d.warnings.begin(), warnings.begin(), warnings.end());
  return d;
}

SeriesDiagnosis kv_partial_sum(std::span<const double> mu_values) {
  std::vector<double> lm(mu_values.size());
  for (std::size_t i = 0; i < mu_values.size(); ++i) {
    lm[i] = mu_values[i] > 0.0 ? std::log(mu_values[i]) : -num::kInf;
  }
  return kv_partial_sum_log(lm);
}

EquivalenceReport equivalence_check(const OmegaProfile& omega) {
  EquivalenceReport r;
  r.integral = dini_integral(omega, omega.s0(), 1e-8);
  r.series = dini_series(omega);
  r.conclusive = r.integral.verdict != Verdict::inconclusive &&
                 r.series.verdict != Verdict::inconclusive;
  r.agree = r.conclusive && r.integral.verdict == r.series.verdict;
  return r;
}

LaplaceTable laplace_ratio(const OmegaProfile& omega, double m, double l, double A,
                       std::span<const double> taus, double C) {
  if (!(A > 0.0)) throw InvalidInput("laplace_ratio: A must be > 0");
  LaplaceTable table;
  auto log_integrand = [&](double s) {
    const double ls = std::log(s);
    const double lw = omega.log_value_at_log(ls);
    return (m - 2.0) * ls + (l + 1.0) * lw - A * std::exp(lw - 2.0 * ls);
  };
  for (double tau : taus) {
    if (!(tau > 0.0) || tau >= omega.s0()) {
      throw InvalidInput("laplace_ratio: tau must lie in (0, s0)");
    }
    const double lt = std::log(tau);
    const double lw = omega.log_value_at_log(lt);
    const double log_d = (m + 1.0) * lt + l * lw - A * std::exp(lw - 2.0 * lt);
    auto f = [&](double s) { return std::exp(log_integrand(s) - log_d); };

    LaplaceRow row;
    row.tau = tau;
    double sum = 0.0, err = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double b = tau * std::ldexp(1.0, -k);
      const double a = 0.5 * b;
      if (log_integrand(b) - log_d < kLogUnderflow) break;
      // the integrand peaks at the right end; split geometrically toward b
      double lo = a;
      for (int j = 1; j <= 60; ++j) {
        const double hi = j == 60 ? b : b - (b - a) * std::ldexp(1.0, -j);
        if (hi > lo) {
          const auto part = num::integrate(f, lo, hi, 1e-12, 12);
          sum += part.value;
          err += part.error;
        }
        lo = hi;
        if (b - lo <= 1e-15 * b) break;
      }
      if (lo < b) {
        const auto part = num::integrate(f, lo, b, 1e-12, 12);
        sum += part.value;
        err += part.error;
      }
    }
    row.ratio = sum;
    row.error = err;
    row.inconclusive = !std::isfinite(sum) || !(sum > 0.0) || err > 1e-6 * sum;
    table.rows.push_back(row);
  }
  if (table.rows.empty()) return table;

  table.min_ratio = num::kInf;
  table.max_ratio = 0.0;
  bool any_inconclusive = false;
  for (const auto& r : table.rows) {
    table.min_ratio = std::min(table.min_ratio, r.ratio);
    table.max_ratio = std::max(table.max_ratio, r.ratio);
    any_inconclusive = any_inconclusive || r.inconclusive;
  }
  for (const auto& r : table.rows) {
    double lo = r.ratio, hi = r.ratio;
    for (const auto& o : table.rows) {
      if (o.tau <= r.tau && o.tau >= r.tau / 10.0) {
        lo = std::min(lo, o.ratio);
        hi = std::max(hi, o.ratio);
      }
    }
    table.worst_decade_spread = std::max(table.worst_decade_spread, hi / lo);
  }
  table.bracketed = !any_inconclusive && table.min_ratio >= 1.0 / C &&
                    table.max_ratio <= C && table.worst_decade_spread < C;
  return table;
}

}  // namespace extinctlab
