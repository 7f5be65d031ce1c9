#include <doctest.h>

#include <cmath>
#include <vector>

#include "extinctlab/analysis.hpp"
#include "extinctlab/numerics.hpp"

using namespace extinctlab;

TEST_SUITE("analysis") {

TEST_CASE("Dini integral closed forms") {
  // int_0^{1/e} (ln 1/s)^{-beta} ds/s = 1/(beta-1)
  for (double beta : {2.0, 3.0, 1.5}) {
    const auto w = OmegaProfile::log_power(beta);
    const auto r = dini_integral(w, std::exp(-1.0), 1e-8);
    CHECK(r.verdict == Verdict::convergent);
    CHECK(r.value == doctest::Approx(1.0 / (beta - 1.0)).epsilon(1e-8));
  }
  // the slow beta = 1.5 tail cannot certify 1e-10: not called convergent
  const auto slow = dini_integral(OmegaProfile::log_power(1.5), std::exp(-1.0), 1e-10);
  CHECK(slow.verdict == Verdict::inconclusive);
  CHECK(slow.value == doctest::Approx(2.0).epsilon(1e-8));
  // int_0^1 s^alpha ds/s = 1/alpha
  const auto r = dini_integral(OmegaProfile::power(0.5), 1.0, 1e-10);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("Dini integral divergence") {
  for (const auto& w : {OmegaProfile::constant(1.0), OmegaProfile::log_power(1.0),
                        OmegaProfile::log_power(0.5)}) {
    const auto r = dini_integral(w, w.s0(), 1e-8);
    CHECK(r.verdict == Verdict::divergent);
  }
}

TEST_CASE("series criterion on the family") {
  CHECK(dini_series(OmegaProfile::power(1.0)).verdict == Verdict::convergent);
  CHECK(dini_series(OmegaProfile::log_power(2.0)).verdict == Verdict::convergent);
  CHECK(dini_series(OmegaProfile::log_power(1.0)).verdict == Verdict::divergent);
  CHECK(dini_series(OmegaProfile::constant(1.0)).verdict == Verdict::divergent);
}

TEST_CASE("slope test on p-series") {
  std::vector<double> n, t2, t1, th;
  for (int k = 1; k <= 2000; ++k) {
    n.push_back(k);
    t2.push_back(-2.0 * std::log(k));
    t1.push_back(-1.0 * std::log(k));
    th.push_back(-0.5 * std::log(k));
  }
  const auto c = diagnose_log_terms(n, t2);
  CHECK(c.verdict == Verdict::convergent);
  CHECK(c.fitted_exponent == doctest::Approx(-2.0).epsilon(1e-6));
  // partial sum approaches pi^2/6
  CHECK(c.partial_sums.back() == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-3));
  CHECK(diagnose_log_terms(n, th).verdict == Verdict::divergent);
  // the harmonic series sits in the band the slope test refuses to call
  CHECK(diagnose_log_terms(n, t1).verdict == Verdict::inconclusive);
}

TEST_CASE("condensation handles terms that need logs of logs") {
  // a_n = 1/(n (ln n)^2): n a_n at L = ln n is L^-2
  const auto c = condensed_diagnosis([](double L) { return -2.0 * std::log(L); });
  CHECK(c.verdict == Verdict::convergent);
  const auto d = condensed_diagnosis([](double L) { return -std::log(L); });
  CHECK(d.verdict == Verdict::divergent);
}

TEST_CASE("KV sum with mu_n = 2^n") {
  std::vector<double> mu;
  for (int n = 1; n <= 60; ++n) mu.push_back(std::ldexp(1.0, n));
  const auto r = kv_partial_sum(mu);
  CHECK(r.partial_sums.back() == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  std::vector<double> lmu;
  for (int n = 1; n <= 60; ++n) lmu.push_back(n * std::log(2.0));
  CHECK(kv_partial_sum_log(lmu).partial_sums.back() == doctest::Approx(2.0 * std::log(2.0)));
}

TEST_CASE("integral and series verdicts agree") {
  for (const auto& w : {OmegaProfile::power(1.5), OmegaProfile::log_power(3.0),
                        OmegaProfile::log_power(0.5)}) {
    const auto e = equivalence_check(w);
    CHECK(e.conclusive);
    CHECK(e.agree);
  }
}

TEST_CASE("Laplace-type ratio stays bracketed") {
  const auto w = OmegaProfile::log_power(2.0);
  const auto taus = num::logspace(1e-2, 1e-1, 11);
  const auto t = laplace_ratio(w, 5.0, -2.0, 0.5, taus);
  CHECK(t.bracketed);
  CHECK(t.min_ratio > 0.1);
  CHECK(t.max_ratio < 10.0);
  // oracle: composite Simpson on a fine grid for one tau
  const double tau = taus[5], A = 0.5;
  auto f = [&](double s) {
    if (s <= 0.0) return 0.0;
    return std::pow(s, 3) * std::pow(w(s), -1.0) * std::exp(-A * w(s) / (s * s));
  };
  const int n = 20000;
  double acc = f(0.0) + f(tau);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(tau * i / n);
  const double simpson = acc * tau / (3.0 * n);
  const double closed = std::pow(tau, 6) * std::pow(w(tau), -2.0) * std::exp(-A * w(tau) / (tau * tau));
  CHECK(t.rows[5].ratio == doctest::Approx(simpson / closed).epsilon(1e-6));
}

}
