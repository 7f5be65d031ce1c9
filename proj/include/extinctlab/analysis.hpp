#pragma once

// Improper-integral and series diagnostics: the Dini integral of omega(s)/s,
// the matching series criterion, the Kondratiev-Veron sum and the
// Laplace-type ratio used for the energy estimates.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "extinctlab/profiles.hpp"

namespace extinctlab {

enum class Verdict { convergent, divergent, inconclusive };

std::string to_string(Verdict v);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t subdivisions = 0;
  Verdict verdict = Verdict::inconclusive;
  /// Contribution of each window in the log variable u = ln(c/s).
  std::vector<double> windows;
  double tail = 0.0;  // geometric extrapolation beyond the last window
};

struct DiniOptions {
  double blowup_factor = 10.0;  // partial sum / first window needed for divergence
  std::size_t run = 20;         // consecutive windows that must agree
  double decay_ratio = 0.97;    // window ratio that counts as geometric decay
  double flat_ratio = 0.995;    // window ratio that counts as no decay
  std::size_t max_windows = 62;
};

/// int_0^c omega(s)/s ds, computed as int_0^inf omega(c e^{-u}) du over the
/// u-windows [0,1], [1,2], [2,4], ... (each window one decade-doubling
/// closer to s = 0). The verdict follows the window ratios.
QuadratureResult dini_integral(const OmegaProfile& omega, double c, double tol,
                               const DiniOptions& opts = {});

struct SeriesDiagnosis {
  std::vector<std::size_t> indices;   // where partial sums were recorded
  std::vector<double> partial_sums;
  double fitted_exponent = 0.0;       // slope of ln(term) against ln(index)
  int condensation_level = 0;         // 0: raw terms
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> warnings;
};

/// Verdict thresholds on the fitted tail slope.
inline constexpr double kSlopeConvergent = -1.05;
inline constexpr double kSlopeDivergent = -0.95;

Verdict slope_verdict(double slope);

/// Slope test on Cauchy-condensed terms, levels 1 and 2. log_na(L) is
/// ln(n a_n) at L = ln n; L runs up to 1000 ln 2 at level 1 and far beyond
/// at level 2, so it must be evaluated without forming n.
SeriesDiagnosis condensed_diagnosis(const std::function<double(double)>& log_na);

/// Sum over n >= n0 of omega((n ln n)^{-1/2}) / n. Partial sums are explicit
/// up to n_max; the verdict comes from the slope test applied to the
/// Cauchy-condensed terms 2^k a(2^k) (twice condensed when the first pass is
/// inconclusive), evaluated in log space far beyond n_max.
SeriesDiagnosis dini_series(const OmegaProfile& omega, std::size_t n0 = 2,
                            std::size_t n_max = 1000000);

/// Slope test on a finite sequence given as ln(term). Fits over the last
/// decade of indices; partial sums accumulate exp(log_terms).
SeriesDiagnosis diagnose_log_terms(std::span<const double> indices,
                                   std::span<const double> log_terms);

/// Kondratiev-Veron sum of ln(mu_n)/mu_n, n = 1, 2, ...; values mu <= 1
/// are dropped with a warning.
SeriesDiagnosis kv_partial_sum(std::span<const double> mu_values);

/// Same as kv_partial_sum with ln(mu_n) supplied, for sequences that overflow.
SeriesDiagnosis kv_partial_sum_log(std::span<const double> log_mu_values);

struct EquivalenceReport {
  QuadratureResult integral;
  SeriesDiagnosis series;
  bool conclusive = false;
  bool agree = false;
};

EquivalenceReport equivalence_check(const OmegaProfile& omega);

struct LaplaceRow {
  double tau = 0.0;
  double ratio = 0.0;
  double error = 0.0;
  bool inconclusive = false;
};

struct LaplaceTable {
  std::vector<LaplaceRow> rows;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  /// max/min ratio over every decade of tau in the table.
  double worst_decade_spread = 0.0;
  bool bracketed = false;  // all ratios in [1/C, C] and decade spread below C
};

/// Ratio of int_0^tau s^{m-2} omega^{l+1} exp(-A omega/s^2) ds to
/// tau^{m+1} omega(tau)^l exp(-A omega(tau)/tau^2) for each tau.
LaplaceTable laplace_ratio(const OmegaProfile& omega, double m, double l, double A,
                       std::span<const double> taus, double C = 10.0);

}  // namespace extinctlab
