#include "varbounds/calculus.hpp"
#include "varbounds/error.hpp"
#include "varbounds/smooth_function.hpp"

#include <doctest.h>

#include <cmath>

using namespace varbounds;

namespace {

// Central-difference oracle for the k-th derivative (k <= 3).
double numeric_derivative(const SmoothFunction& f, int k, double x) {
  if (k == 0) return f.derivative(0, x);
  const double h = std::pow(1e-16, 1.0 / (k + 2)) * (1.0 + std::abs(x));
  return (numeric_derivative(f, k - 1, x + h) - numeric_derivative(f, k - 1, x - h)) / (2.0 * h);
}

} // namespace

TEST_CASE("derivatives agree with finite differences") {
  const char* exprs[] = {"x^3 - 2*x", "exp(x/2)", "sin(x)", "cos(3*x + 1)", "log(x/(1-x))",
                         "x*exp(-x)", "(x+2)^1.5", "2^(-x)", "1/(x+3)", "sin(x)*x^2"};
  for (const char* e : exprs) {
    const SmoothFunction f = parse_expression(e);
    for (double x : {0.2, 0.45, 0.8}) {
      for (int k = 1; k <= 2; ++k) {
        INFO(e, " k=", k, " x=", x);
        CHECK(f.derivative(k, x) == doctest::Approx(numeric_derivative(f, k, x)).epsilon(1e-4));
      }
    }
  }
}

TEST_CASE("closed-form derivatives") {
  const SmoothFunction e = SmoothFunction::exp(0.5);
  CHECK(e.derivative(4, 1.0) == doctest::Approx(std::pow(0.5, 4) * std::exp(0.5)));
  const SmoothFunction s = SmoothFunction::sin(2.0, 1.0);
  CHECK(s.derivative(3, 0.3) == doctest::Approx(-8.0 * std::cos(2.0 * 0.3 + 1.0)));
  const SmoothFunction l = SmoothFunction::log(1.0, 0.0);
  CHECK(l.derivative(3, 2.0) == doctest::Approx(2.0 / 8.0));
  const SmoothFunction p = SmoothFunction::power(1.0, 1.0, 0.5);
  CHECK(p.derivative(2, 3.0) == doctest::Approx(-0.25 * std::pow(4.0, -1.5)));
  // Leibniz rule on a product
  const SmoothFunction xs = SmoothFunction::identity() * SmoothFunction::sin(1.0);
  CHECK(xs.derivative(2, 0.7) == doctest::Approx(2.0 * std::cos(0.7) - 0.7 * std::sin(0.7)));
}

TEST_CASE("polynomials stay symbolic") {
  const SmoothFunction f = parse_expression("(x+1)^2 - 3");
  const auto c = f.polynomial_coefficients();
  REQUIRE(c.has_value());
  CHECK(*c == std::vector<double>{-2.0, 2.0, 1.0});
  CHECK(f.derivative(3, 5.0) == 0.0);
  CHECK(f.derivative(SmoothFunction::kDefaultMaxOrder, 5.0) == 0.0);
  CHECK(parse_expression("4*x - 1").as_affine().has_value());
  CHECK(parse_expression("pi").as_constant().value() == doctest::Approx(M_PI));
}

TEST_CASE("derivative order beyond max_order throws") {
  const SmoothFunction f = SmoothFunction::exp(1.0).with_max_order(2);
  CHECK(f.derivative(2, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(f.derivative(3, 0.0), InvalidArgument);
  CHECK_THROWS_AS(f.derivative(-1, 0.0), InvalidArgument);
}

TEST_CASE("parser rejects what it cannot differentiate") {
  CHECK_THROWS_AS(parse_expression("exp(x^2)"), InvalidArgument);
  CHECK_THROWS_AS(parse_expression("x^x"), InvalidArgument);
  CHECK_THROWS_AS(parse_expression("1/(x^2+1)"), InvalidArgument);
  CHECK_THROWS_AS(parse_expression("tan(x)"), InvalidArgument);
  CHECK_THROWS_AS(parse_expression("x +"), InvalidArgument);
  CHECK_THROWS_AS(parse_expression("x/0"), InvalidArgument);
  CHECK_THROWS_AS(parse_expression("(x"), InvalidArgument);
  CHECK_THROWS_AS(parse_expression("(-2)^x"), InvalidArgument);
}

TEST_CASE("expression values") {
  CHECK(parse_expression("2^(-x)").derivative(0, 3.0) == doctest::Approx(0.125));
  CHECK(parse_expression("log(x/(1-x))").derivative(0, 0.75) == doctest::Approx(std::log(3.0)));
  CHECK(parse_expression("-x^2").derivative(0, 3.0) == doctest::Approx(-9.0));
  CHECK(parse_expression("2*x^3/4").derivative(0, 2.0) == doctest::Approx(4.0));
  CHECK(parse_expression("exp(x/2)*sin(x)").derivative(0, 1.0) ==
        doctest::Approx(std::exp(0.5) * std::sin(1.0)));
}
