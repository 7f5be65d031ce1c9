#include <doctest.h>

#include <cmath>

#include "extinctlab/energy.hpp"
#include "extinctlab/numerics.hpp"

using namespace extinctlab;

namespace {

SolutionTrajectory linear_run(double u0, double horizon = 30.0) {
  ProblemSpec s;
  s.potential = PotentialKind::profile;
  s.field = PotentialField(1.0, OmegaProfile::power(1.0));
  s.u0.value = u0;
  SolverOptions o;
  o.cells = 200;
  o.dt = 2e-3;
  o.horizon = horizon;
  o.max_snapshots = 400;
  return run(s, o);
}

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("exponents for q = 1/2, N = 1") {
  const auto e = make_exponents(0.5, 1);
  CHECK(e.theta1 == doctest::Approx(4.0 / 7.0));
  CHECK(e.theta2 == doctest::Approx(1.0 / 7.0));
  CHECK(e.lambda0 == doctest::Approx(1.0 / 3.0));
  CHECK(e.lambda1 == doctest::Approx(0.12));
  CHECK(e.lambda2 == doctest::Approx(3.0 / 11.0));
  CHECK(e.kappa(1) == doctest::Approx(0.12 / 1.12));
}

TEST_CASE("exponents against the defining formulas") {
  for (int N : {1, 2, 3}) {
    for (double q : {0.2, 0.5, 0.8}) {
      const auto e = make_exponents(q, N);
      const double den = 2 * (q + 1) + N * (1 - q);
      CHECK(e.theta1 == doctest::Approx(((q + 1) + N * (1 - q)) / den));
      CHECK(e.theta2 == doctest::Approx(N * (1 - q) / den));
      const double p2 = (1 - e.theta2) * (1 - q);
      CHECK(e.lambda2 == doctest::Approx(p2 / (2 - p2)));
      CHECK(e.lambda0 == doctest::Approx((1 - q) / (1 + q)));
    }
  }
}

TEST_CASE("ledger columns and the global estimate") {
  const auto tr = linear_run(0.3);
  REQUIRE(tr.extinction_time);
  const auto w = OmegaProfile::power(1.0);
  const auto L = compute_ledger(tr, num::linspace(0.0, 1.0, 11), &w);
  CHECK(L.y0 == doctest::Approx(tr.y0()));
  // H(t, 0) is the squared L2 norm at the snapshot
  for (std::size_t k = 0; k < tr.snapshots.size(); k += 50) {
    double l2 = 0.0;
    for (std::size_t i = 0; i < tr.grid.size(); ++i)
      l2 += tr.snapshots[k].u[i] * tr.snapshots[k].u[i] * tr.grid.volumes[i];
    CHECK(L.H0[k] == doctest::Approx(l2).epsilon(1e-12));
  }
  // y(tau) is nonincreasing in tau
  for (std::size_t j = 1; j < L.y.size(); ++j) CHECK(L.y[j] <= L.y[j - 1] * (1 + 1e-12) + 1e-15);
  const auto g = verify_global_estimate(L);
  CHECK(g.holds);
}

TEST_CASE("psi functions follow their definitions") {
  const PotentialField f(1.0, OmegaProfile::power(1.0));
  const auto e = make_exponents(0.5, 1);
  const double tau = 0.4;
  const auto p = psi_functions(f, e, tau);
  const double a = f(tau), sp = s_ramp(f.omega(), tau).ds;
  CHECK(p.psi[0] == doctest::Approx(a * sp));
  CHECK(p.psi[1] == doctest::Approx(std::pow(a, 1 - e.theta1)));
  CHECK(p.psi[2] == doctest::Approx(std::pow(a, 1 - e.theta2) * sp));
}

TEST_CASE("ODI residual is finite on an extinct run") {
  const auto tr = linear_run(0.1);
  const auto w = OmegaProfile::power(1.0);
  const auto L = compute_ledger(tr, num::linspace(0.0, 1.0, 21), &w);
  const auto r = ode_inequality_residual(L, PotentialField(1.0, w), make_exponents(0.5, 1));
  CHECK(r.finite);
  CHECK(r.c0 > 0.0);
  CHECK(std::isfinite(r.c0));
}

TEST_CASE("interpolation corpus is reproducible and the probe fits finite constants") {
  const auto g = make_radial_grid(1, 1.0, 200);
  const auto a = interpolation_corpus(g, 8, 42);
  const auto b = interpolation_corpus(g, 8, 42);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].v == b[i].v);
  const auto c = interpolation_corpus(g, 8, 43);
  CHECK(c.back().v != a.back().v);
  const auto r = probe_interpolation(g, 0.25, 0.75, 1.5, a);
  CHECK(r.corpus_size == a.size());
  CHECK(std::isfinite(r.c1));
  CHECK(r.c2 == doctest::Approx(2 * r.c2_min));
}

}
