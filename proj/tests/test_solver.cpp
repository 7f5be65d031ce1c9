#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "extinctlab/error.hpp"
#include "extinctlab/grid.hpp"
#include "extinctlab/kernels.hpp"
#include "extinctlab/solver.hpp"

using namespace extinctlab;

TEST_SUITE("solver") {

TEST_CASE("shell volumes add up to the ball") {
  const double R = 1.7;
  CHECK(make_radial_grid(1, R, 37).total_volume() == doctest::Approx(2 * R));
  CHECK(make_radial_grid(2, R, 37).total_volume() == doctest::Approx(std::numbers::pi * R * R));
  CHECK(make_radial_grid(3, R, 37).total_volume() == doctest::Approx(4.0 / 3.0 * std::numbers::pi * R * R * R));
  const auto g = make_radial_grid(3, 1.0, 10);
  CHECK(g.coupling.front() == 0.0);
  CHECK(g.coupling.back() == 0.0);
}

TEST_CASE("tridiagonal solve matches a dense LU") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const std::size_t n = 50;
  std::vector<double> lo(n), di(n), up(n), rhs(n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = i ? U(rng) : 0.0;
    up[i] = i + 1 < n ? U(rng) : 0.0;
    di[i] = 3.0 + U(rng);
    rhs[i] = U(rng);
    A(i, i) = di[i];
    if (i) A(i, i - 1) = lo[i];
    if (i + 1 < n) A(i, i + 1) = up[i];
    b(i) = rhs[i];
  }
  const Eigen::VectorXd x = A.partialPivLu().solve(b);
  solve_tridiagonal(lo, di, up, rhs);
  for (std::size_t i = 0; i < n; ++i) CHECK(rhs[i] == doctest::Approx(x(i)).epsilon(1e-12));
}

TEST_CASE("absorption never changes sign and leaves zeros alone") {
  std::vector<double> u = {1.0, -0.5, 0.0, 1e-12, -1e-12};
  const std::vector<double> a(u.size(), 5.0);
  kernels::serial::absorb(u, a, 0.5, 0.1);
  CHECK(u[0] > 0.0);
  CHECK(u[1] < 0.0);
  CHECK(u[2] == 0.0);
  CHECK(u[3] >= 0.0);
  CHECK(u[4] <= 0.0);
}

TEST_CASE("serial and OpenMP kernels agree") {
  const auto g = make_radial_grid(2, 1.0, 5000);
  std::vector<double> u(g.size()), a(g.size(), 0.3);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 + std::sin(7 * g.centers[i]);
  auto v = u;
  kernels::absorb(kernels::Backend::serial, u, a, 0.5, 1e-3);
  kernels::absorb(kernels::Backend::omp, v, a, 0.5, 1e-3);
  CHECK(u == v);
  const auto ms = kernels::moments(kernels::Backend::serial, u, g.volumes);
  const auto mo = kernels::moments(kernels::Backend::omp, u, g.volumes);
  CHECK(ms.mass == doctest::Approx(mo.mass).epsilon(1e-13));
  CHECK(ms.l2sq == doctest::Approx(mo.l2sq).epsilon(1e-13));
  CHECK(ms.linf == mo.linf);
}

TEST_CASE("suffix-sum energy rows match the direct sums") {
  for (int N : {1, 3}) {
    const auto g = make_radial_grid(N, 1.0, 300);
    std::vector<double> u(g.size()), a(g.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = std::cos(4 * g.centers[i]) + 0.2;
      a[i] = std::exp(-1.0 / (g.centers[i] + 0.1));
    }
    const std::vector<double> taus = {0.0, 0.0017, 0.25, 0.5003, 0.999, 1.0};
    const auto f = kernels::serial::energy_rows(g, u, a, 0.5, taus);
    const auto d = kernels::serial::energy_rows_direct(g, u, a, 0.5, taus);
    for (std::size_t j = 0; j < taus.size(); ++j) {
      CHECK(f.H[j] == doctest::Approx(d.H[j]).epsilon(1e-12));
      CHECK(f.E[j] == doctest::Approx(d.E[j]).epsilon(1e-12));
      CHECK(f.J[j] == doctest::Approx(d.J[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero potential conserves mass") {
  ProblemSpec s;
  s.potential = PotentialKind::zero;
  s.u0.kind = InitialKind::random;
  s.u0.value = 1.0;
  SolverOptions o;
  o.cells = 200;
  o.dt = 1e-3;
  o.horizon = 1.0;
  const auto tr = run(s, o);
  CHECK_FALSE(tr.extinction_time);
  for (double m : tr.mass) CHECK(std::abs(m - tr.mass.front()) <= 1e-11 * std::abs(tr.mass.front()));
}

TEST_CASE("constant potential follows the ODE extinction time") {
  ProblemSpec s;
  s.potential = PotentialKind::constant;
  s.epsilon = 1.0;
  s.u0.value = 1.0;
  SolverOptions o;
  o.cells = 50;
  o.dt = 1e-3;
  o.horizon = 5.0;
  const auto tr = run(s, o);
  REQUIRE(tr.extinction_time);
  const double T0 = ode_extinction_time(1.0, 0.5, 1.0);
  CHECK(T0 == doctest::Approx(2.0));
  CHECK(*tr.extinction_time == doctest::Approx(T0).epsilon(0.01));
}

TEST_CASE("degenerate potential: extinction for omega = r, positivity for the singular profile") {
  SolverOptions o;
  o.cells = 200;
  o.dt = 2e-3;
  o.horizon = 30.0;
  ProblemSpec lin;
  lin.potential = PotentialKind::profile;
  lin.field = PotentialField(1.0, OmegaProfile::power(1.0));
  lin.u0.value = 0.1;
  CHECK(run(lin, o).extinction_time.has_value());

  ProblemSpec sing = lin;
  sing.field = PotentialField(1.0, OmegaProfile::singular(4.0));
  o.horizon = 10.0;
  const auto p = positivity_probe(sing, o);
  CHECK_FALSE(p.collapsed);
  CHECK(p.final_min > 1e-6);
}

TEST_CASE("input validation") {
  ProblemSpec s;
  s.q = 1.5;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  s = {};
  s.potential = PotentialKind::profile;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  s = {};
  s.u0.value = 0.5;
  s.nu = 0.8;
  CHECK_THROWS_AS(run(s, {}), InvalidInput);
}

}
