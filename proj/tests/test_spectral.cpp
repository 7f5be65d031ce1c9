#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "extinctlab/grid.hpp"
#include "extinctlab/numerics.hpp"
#include "extinctlab/spectral.hpp"

using namespace extinctlab;

namespace {

Eigen::VectorXd dense_eigenvalues(const SymTridiag& T) {
  const auto n = static_cast<Eigen::Index>(T.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, i) = T.d[i];
    if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = T.e[i];
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A, Eigen::EigenvaluesOnly).eigenvalues();
}

RadialPotential logb2() { return RadialPotential::profile(PotentialField(1.0, OmegaProfile::log_power(2.0))); }

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("Sturm counts and Gershgorin bounds agree with a dense solve") {
  const auto g = make_radial_grid(1, 1.0, 120);
  const auto T = spectral_matrix(g, logb2(), 2 * std::log(100.0));
  const auto ev = dense_eigenvalues(T);
  CHECK(T.lower_bound() <= ev(0));
  CHECK(T.upper_bound() >= ev(ev.size() - 1));
  for (int k : {0, 5, 60}) {
    const double x = 0.5 * (ev(k) + ev(k + 1));
    CHECK(T.sturm_count(x) == static_cast<std::size_t>(k + 1));
  }
}

TEST_CASE("lowest eigenpair against the dense solver") {
  const auto g = make_radial_grid(1, 1.0, 200);
  for (double h : {0.3, 0.05, 0.01}) {
    const auto T = spectral_matrix(g, logb2(), -2 * std::log(h));
    const auto gs = lowest_eigenpair(T);
    const double ref = dense_eigenvalues(T)(0);
    CHECK(gs.lambda == doctest::Approx(ref).epsilon(1e-10));
    CHECK(gs.residual < 1e-9);
  }
}

TEST_CASE("constant potentials have constant ground states") {
  const auto c = RadialPotential::constant(1.0);
  const auto g = lambda1(c, 0.1);
  CHECK(g.lambda == doctest::Approx(100.0).epsilon(1e-10));
  CHECK_FALSE(g.fallback);
  for (double v : g.u) CHECK(v == doctest::Approx(g.u.front()).epsilon(1e-8));
  CHECK(lambda1(RadialPotential::constant(0.0), 0.01).lambda == doctest::Approx(0.0).epsilon(1e-10));
  // mu(alpha) = alpha^{-(1-q)} for a = 1
  CHECK(mu_of_alpha(c, 0.5, 4.0).lambda == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("ground state energy grows as h shrinks") {
  const auto s = scan_lambda1(logb2(), num::logspace(1e-3, 1e-1, 5));
  for (std::size_t i = 1; i < s.lambda.size(); ++i) CHECK(s.lambda[i] < s.lambda[i - 1]);
}

TEST_CASE("KV sum for a = 1") {
  const auto kv = kv_criterion(RadialPotential::constant(1.0), 20);
  CHECK(kv.partial_sums.back() == doctest::Approx(2 * std::log(2.0)).epsilon(1e-3));
  CHECK(kv.verdict == Verdict::convergent);
}

TEST_CASE("serial and OpenMP mu_n scans agree") {
  SpectralOptions s, o;
  s.backend = kernels::Backend::serial;
  o.backend = kernels::Backend::omp;
  s.cells = o.cells = 200;
  const auto a = mu_n_sequence(logb2(), 12, s);
  const auto b = mu_n_sequence(logb2(), 12, o);
  CHECK(a.lambda == b.lambda);
}

TEST_CASE("weighted series verdicts follow the Dini condition") {
  CHECK(ground_state_series(logb2(), 0.5, 1.0, 2, 40).verdict == Verdict::convergent);
  const auto b1 = RadialPotential::profile(PotentialField(1.0, OmegaProfile::log_power(1.0)));
  CHECK(ground_state_series(b1, 0.5, 1.0, 2, 40).verdict == Verdict::divergent);
}

TEST_CASE("semiclassical sandwich and rho inverse estimate") {
  const PotentialField f(1.0, OmegaProfile::log_power(2.0));
  const auto s = verify_ground_state_sandwich(f, num::logspace(1e-3, 1e-1, 5));
  CHECK(s.width_decades <= 2.0);
  CHECK(s.worst_refine_change < 0.05);
  const auto r = verify_rho_inverse_estimate(f, 1e-12, 1e-6, 1.0);
  CHECK(r.violations == 0);
  CHECK(r.r_bracket_violations == 0);
}

}
