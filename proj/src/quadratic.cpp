#include "varbounds/quadratic.hpp"

#include "varbounds/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace varbounds {

Quadratic::Quadratic(double d, double b, double g) : delta(d), beta(b), gamma(g) {
  if (!std::isfinite(d) || !std::isfinite(b) || !std::isfinite(g))
    throw InvalidArgument("quadratic coefficients must be finite");
  if (std::abs(d) + std::abs(b) + std::abs(g) <= 0.0)
    throw InvalidArgument("quadratic must satisfy |delta| + |beta| + |gamma| > 0");
}

std::array<double, 3> Quadratic::normalized() const noexcept {
  const double scale = std::max({std::abs(delta), std::abs(beta), std::abs(gamma)});
  if (scale == 0.0) return {0.0, 0.0, 0.0};
  return {delta / scale, beta / scale, gamma / scale};
}

std::string Quadratic::to_string() const {
  std::ostringstream os;
  os.precision(12);
  os << delta << "*x^2 " << (beta < 0 ? "- " : "+ ") << std::abs(beta) << "*x " << (gamma < 0 ? "- " : "+ ")
     << std::abs(gamma);
  return os.str();
}

double normalized_distance(const Quadratic& a, const Quadratic& b) noexcept {
  const auto na = a.normalized();
  const auto nb = b.normalized();
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(na[i] - nb[i]));
  return d;
}

} // namespace varbounds
