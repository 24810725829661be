#pragma once

#include <functional>
#include <vector>

namespace varbounds {

/// Change of variables from the Gauss-Legendre variable u in (-1, 1).
///   rational: x = c + s*u/(1-u^2)            on (-inf, inf)
///             x = a + s*(v/(1-v))^2          on [a, inf), v = (1+u)/2
///             x = m + h*sin(pi*u/2)          on [a, b]
///   tanh:     x = c + s*sinh(pi/2 sinh(t))   on (-inf, inf), t = 5.5u
///             x = a + s*exp(pi/2 sinh(t))    on (a, inf)
///             x = m + h*tanh(pi/2 sinh(r))   on (a, b), r = 5u
/// The tanh (double-exponential) maps suit integrands with slow algebraic
/// decay, such as polynomial moments of heavy-tailed members. The sine map
/// clusters nodes at both ends and absorbs inverse-square-root endpoint
/// singularities.
/// cluster_ends requests double-exponential clustering at every finite end,
/// for integrands that are unbounded there: bounded ranges then use the
/// tanh form above, and rational half lines use x = a + s*exp(t - e^{-t}),
/// t = 5u, which keeps an exponential (not double-exponential) tail.
enum class InfiniteMap { rational, tanh };

struct QuadratureRule {
  std::vector<double> nodes;   // ascending, in (-1, 1)
  std::vector<double> weights;
  std::vector<double> complements;  // 1 - |node|, to full relative precision
};

/// n-point Gauss-Legendre rule on [-1, 1]; computed once per n and cached.
const QuadratureRule& gauss_legendre(int n);

/// Nodes and weights (Jacobian included) for integrating over (lo, hi).
/// center and scale place the mapped nodes on unbounded ranges.
struct MappedNodes {
  std::vector<double> x;
  std::vector<double> w;
  /// Distance of x from the nearer finite end, exact even where x itself has
  /// rounded onto that end; end is -1 (lower), +1 (upper) or 0 (none).
  std::vector<double> gap;
  std::vector<signed char> end;
};

MappedNodes map_nodes(double lo, double hi, int n, InfiniteMap map, double center, double scale,
                      bool cluster_ends = false);

/// Composite rule: an n-point Gauss-Legendre rule on each [breaks[i], breaks[i+1]].
MappedNodes composite_nodes(const std::vector<double>& breaks, int n);

double integrate(const std::function<double(double)>& f, const MappedNodes& nodes);

} // namespace varbounds
