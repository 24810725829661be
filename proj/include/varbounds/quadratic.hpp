#pragma once

#include <array>
#include <string>

namespace varbounds {

/// q(x) = delta*x^2 + beta*x + gamma.
struct Quadratic {
  double delta = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  Quadratic() = default;
  /// Throws InvalidArgument unless |delta| + |beta| + |gamma| > 0 and all are finite.
  Quadratic(double delta, double beta, double gamma);

  double operator()(double x) const noexcept { return (delta * x + beta) * x + gamma; }

  std::array<double, 3> coefficients() const noexcept { return {delta, beta, gamma}; }

  /// Coefficients divided by the largest magnitude among them.
  std::array<double, 3> normalized() const noexcept;

  std::string to_string() const;
};

/// Largest componentwise gap between the normalized coefficient vectors.
double normalized_distance(const Quadratic& a, const Quadratic& b) noexcept;

} // namespace varbounds
