#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "extinctlab/error.hpp"
#include "extinctlab/numerics.hpp"

using namespace extinctlab;

TEST_SUITE("numerics") {

TEST_CASE("linspace and logspace hit both endpoints") {
  const auto a = num::linspace(-1.0, 3.0, 5);
  REQUIRE(a.size() == 5);
  CHECK(a.front() == -1.0);
  CHECK(a.back() == 3.0);
  CHECK(a[2] == doctest::Approx(1.0));
  const auto b = num::logspace(1e-6, 1e2, 9);
  CHECK(b.front() == doctest::Approx(1e-6));
  CHECK(b.back() == doctest::Approx(1e2));
  CHECK(b[1] / b[0] == doctest::Approx(10.0));
}

TEST_CASE("logsumexp matches the direct sum and skips -inf") {
  const std::vector<double> xs = {std::log(1.0), std::log(2.0), -num::kInf, std::log(3.0)};
  CHECK(num::logsumexp(xs) == doctest::Approx(std::log(6.0)));
  const std::vector<double> big = {1000.0, 1000.0};
  CHECK(num::logsumexp(big) == doctest::Approx(1000.0 + std::log(2.0)));
  CHECK(num::logsumexp(std::vector<double>{}) == -num::kInf);
  CHECK(num::logaddexp(std::log(0.25), std::log(0.75)) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("bisect finds sqrt 2 and rejects a bracket without a sign change") {
  const double r = num::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(num::bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), BracketError);
}

TEST_CASE("adaptive quadrature against antiderivatives") {
  auto e = num::integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(e.value == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-13));
  // endpoint singularity of 1/sqrt(x)
  auto s = num::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10, 40);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-6));
  auto p = num::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(p.value == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("least squares slope and trapezoid are exact on lines") {
  const std::vector<double> x = {0.0, 1.0, 3.0, 4.5};
  std::vector<double> y;
  for (double v : x) y.push_back(2.5 * v - 1.0);
  CHECK(num::ls_slope(x, y) == doctest::Approx(2.5));
  // int_0^4.5 (2.5x - 1) = 2.5*4.5^2/2 - 4.5
  CHECK(num::trapezoid(x, y) == doctest::Approx(2.5 * 4.5 * 4.5 / 2 - 4.5));
}

}
