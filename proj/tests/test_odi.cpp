#include <doctest.h>

#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "extinctlab/error.hpp"
#include "extinctlab/odi.hpp"

using namespace extinctlab;

namespace {

OdiConfig linear_config(double y0) {
  OdiConfig c(make_exponents(0.5, 1), PotentialField(1.0, OmegaProfile::power(1.0)));
  c.y0 = y0;
  return c;
}

}  // namespace

TEST_SUITE("odi") {

TEST_CASE("tau' solves the plateau equation") {
  for (double y0 : {1e-3, 1e-4, 1e-5}) {
    const auto c = linear_config(y0);
    const auto r = solve_tau_prime(c);
    const double a = c.field(r.tau);
    CHECK(3 * c.c0 * std::pow(a, 2.0 / (1 - c.ex.q)) == doctest::Approx(y0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(solve_tau_prime(linear_config(10.0)), DomainError);
}

TEST_CASE("Y2 matches direct integration of its ODE") {
  namespace ode = boost::numeric::odeint;
  const auto c = linear_config(1e-4);
  const double tp = solve_tau_prime(c).tau;
  const double k = 1.0 / (1.0 + c.ex.lambda2);
  using State = std::array<double, 1>;
  auto rhs = [&](const State& y, State& dy, double t) {
    const double a = c.field(t);
    const double sp = s_ramp(c.field.omega(), t).ds;
    const double psi2 = std::pow(a, 1 - c.ex.theta2) * sp;
    dy[0] = -psi2 * std::pow(std::max(y[0], 0.0) / (3 * c.c0), k);
  };
  for (double t1 : {tp + 0.02, tp + 0.05, tp + 0.1}) {
    State y = {c.y0};
    ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-13, 1e-13), rhs,
                            y, tp, t1, 1e-4);
    const double closed = curve_y2(c, tp, t1);
    if (y[0] > 0.0) CHECK(closed == doctest::Approx(y[0]).epsilon(1e-3));
  }
}

TEST_CASE("assembled curve is continuous, monotone and reaches zero") {
  for (double y0 : {1e-3, 1e-4, 1e-5}) {
    const auto c = linear_config(y0);
    const auto cur = build_curve(c);
    CHECK(cur.monotone);
    CHECK(cur.reaches_zero);
    CHECK(cur.jump_at_prime <= 1e-10);
    CHECK(cur.jump_at_dprime <= 1e-10);
    CHECK(cur.tau_prime <= cur.dprime.tau);
    CHECK(cur.dprime.tau <= cur.tprime.tau);
    for (std::size_t i = 1; i < cur.Y.size(); ++i) CHECK(cur.Y[i] <= cur.Y[i - 1]);
    CHECK(cur.value(c, 0.0) == c.y0);
    CHECK(cur.value(c, cur.tprime.tau + 1.0) == 0.0);
  }
}

TEST_CASE("bracket constant drifts little over a decade of y0") {
  double lo = 1e300, hi = 0.0;
  for (double y0 : {1e-3, 3e-4, 1e-4}) {
    const auto cur = build_curve(linear_config(y0));
    lo = std::min(lo, cur.dprime.bracket_constant);
    hi = std::max(hi, cur.dprime.bracket_constant);
  }
  CHECK(hi / lo < 2.0);
}

TEST_CASE("tau bar solves its defining equation") {
  const auto w = OmegaProfile::log_power(2.0);
  const double t = tau_bar(w, 1.0, 1e-6);
  CHECK(t * t / w(t) == doctest::Approx(1.0 / std::log(1e6)).epsilon(1e-10));
}

TEST_CASE("region classifier picks the smallest rate") {
  const auto c = linear_config(1e-4);
  for (double tau : {0.2, 0.4, 0.8}) {
    for (double y : {1e-8, 1e-5, 1e-3}) {
      const auto p = psi_functions(c.field, c.ex, tau);
      int best = 0;
      double bv = 1e300;
      for (int i = 0; i < 3; ++i) {
        const double F = p.psi[i] * std::pow(y / (3 * c.c0), 1.0 / (1.0 + c.ex.lambda(i)));
        if (F < bv) bv = F, best = i;
      }
      CHECK(static_cast<int>(region_classifier(c, tau, y)) == best);
    }
  }
}

TEST_CASE("extinction iteration follows the Dini verdict") {
  auto c = linear_config(0.5);
  const auto r = extinction_iteration(c, 65536, Verdict::convergent);
  CHECK(r.verdict == BoundVerdict::finite);
  CHECK(std::isfinite(r.R));
  CHECK(r.dini_consistent);
  CHECK(r.sum_check_factor < 2.0);

  OdiConfig k(make_exponents(0.5, 1), PotentialField(1.0, OmegaProfile::constant(1.0)));
  k.y0 = 0.5;
  const auto u = extinction_iteration(k, 65536, Verdict::divergent);
  CHECK(u.verdict == BoundVerdict::unbounded);
  CHECK(std::isinf(u.R));
  CHECK(u.dini_consistent);
}

TEST_CASE("rounds shrink the energy geometrically in the log") {
  const auto r = extinction_iteration(linear_config(0.5), 64);
  REQUIRE(r.rounds.size() >= 3);
  // ln ln(1/y_i) grows by ln(1 + gamma) per round
  for (std::size_t i = 1; i < r.rounds.size(); ++i)
    CHECK(r.rounds[i].log_energy - r.rounds[i - 1].log_energy == doctest::Approx(std::log(2.0)));
}

}
