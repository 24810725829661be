#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace varbounds {

namespace detail {
struct FunctionNode;
}

/// A real function of one variable with exact derivatives of every order up
/// to a declared maximum.
///
/// Values are built from polynomials and the primitives exp, sin, cos, log
/// and real powers, each applied to an affine argument a*x + b, combined
/// through linear combinations and binary products. Derivatives come from
/// closed forms for each primitive, linearity and the Leibniz rule, so no
/// finite differencing is involved.
class SmoothFunction {
public:
  static constexpr int kDefaultMaxOrder = 16;

  /// Zero function.
  SmoothFunction();

  /// sum_i coeffs[i] * x^i
  static SmoothFunction polynomial(std::vector<double> coeffs);
  static SmoothFunction constant(double c);
  /// f(x) = x
  static SmoothFunction identity();
  /// exp(a*x + b)
  static SmoothFunction exp(double a, double b = 0.0);
  static SmoothFunction sin(double a, double b = 0.0);
  static SmoothFunction cos(double a, double b = 0.0);
  /// log(a*x + b), defined where a*x + b > 0.
  static SmoothFunction log(double a, double b = 0.0);
  /// (a*x + b)^m for real m.
  static SmoothFunction power(double a, double b, double m);

  double operator()(double x) const { return derivative(0, x); }

  /// Exact k-th derivative at x. Throws InvalidArgument if k is negative or
  /// above max_order().
  double derivative(int k, double x) const;

  int max_order() const noexcept { return max_order_; }
  SmoothFunction with_max_order(int k) const;

  /// Present when the function is structurally a polynomial.
  std::optional<std::vector<double>> polynomial_coefficients() const;
  /// Present when the function is structurally a*x + b; returns (a, b).
  std::optional<std::pair<double, double>> as_affine() const;
  std::optional<double> as_constant() const;

  std::string to_string() const;

  friend SmoothFunction operator+(const SmoothFunction& f, const SmoothFunction& g);
  friend SmoothFunction operator-(const SmoothFunction& f, const SmoothFunction& g);
  friend SmoothFunction operator*(const SmoothFunction& f, const SmoothFunction& g);
  friend SmoothFunction operator*(double c, const SmoothFunction& f);
  friend SmoothFunction operator-(const SmoothFunction& f);

private:
  explicit SmoothFunction(std::shared_ptr<const detail::FunctionNode> node, int max_order);

  std::shared_ptr<const detail::FunctionNode> node_;
  int max_order_ = kDefaultMaxOrder;
};

/// Parses the primitive-composition grammar documented in docs/expressions.md.
/// Throws InvalidArgument with the offending position on syntax errors or
/// constructs outside the grammar (e.g. a non-affine function argument).
SmoothFunction parse_expression(const std::string& text);

} // namespace varbounds
