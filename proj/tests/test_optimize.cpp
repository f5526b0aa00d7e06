#include <doctest.h>

#include <cmath>

#include "meek/errors.hpp"
#include "meek/optimize.hpp"

using namespace meek;

TEST_CASE("golden section finds a quadratic peak") {
  auto f = [](double x) { return -(x - 2.0) * (x - 2.0); };
  const GoldenResult r = golden_section_max(f, 0.0, 10.0, 1e-10);
  CHECK(r.x == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(r.fx == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("golden section handles an asymmetric unimodal shape") {
  auto f = [](double x) { return x * std::exp(-x); };
  const GoldenResult r = golden_section_max(f, 0.0, 20.0, 1e-9);
  CHECK(r.x == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.fx == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("golden section rejects bad brackets and tolerances") {
  auto f = [](double x) { return -x * x; };
  CHECK_THROWS_AS(golden_section_max(f, 1.0, 1.0, 1e-8), DomainError);
  CHECK_THROWS_AS(golden_section_max(f, 2.0, 1.0, 1e-8), DomainError);
  CHECK_THROWS_AS(golden_section_max(f, 0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(golden_section_max(f, 0.0, 1.0, -1.0), DomainError);
}

TEST_CASE("bisection finds an interior root") {
  auto f = [](double x) { return x * x - 4.0; };
  const double root = bisect_root(f, 0.0, 10.0, 1e-12);
  CHECK(root == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("bisection returns exact endpoint zeros directly") {
  CHECK(bisect_root([](double x) { return x; }, 0.0, 5.0, 1e-9) == 0.0);
  CHECK(bisect_root([](double x) { return x - 5.0; }, 0.0, 5.0, 1e-9) == 5.0);
}

TEST_CASE("bisection requires a sign change") {
  auto f = [](double x) { return x * x + 1.0; };
  CHECK_THROWS_AS(bisect_root(f, 0.0, 10.0, 1e-9), DomainError);
  CHECK_THROWS_AS(bisect_root(f, 3.0, 1.0, 1e-9), DomainError);
}

TEST_CASE("bisection honors a decreasing function") {
  auto f = [](double x) { return 1.0 - x; };
  CHECK(bisect_root(f, 0.0, 4.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-10));
}
