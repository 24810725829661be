#include "varbounds/quadrature.hpp"

#include "varbounds/error.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace varbounds {
namespace {

// Legendre P_n and its derivative at z = cos(theta).
std::pair<double, double> legendre(int n, double z) {
  double p0 = 1.0;
  double p1 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double p2 = p1;
    p1 = p0;
    p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1);
  }
  return {p0, n * (z * p0 - p1) / (z * z - 1.0)};
}

// Newton's method runs in theta so that 1 - |node| = 2 sin^2(theta/2) keeps
// full relative precision next to the endpoints.
QuadratureRule build_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.complements.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double theta = std::numbers::pi * (i + 0.75) / (n + 0.5);
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, std::cos(theta));
      // dP/dtheta = -sin(theta) P'(z)
      const double step = p / (-std::sin(theta) * dp);
      theta -= step;
      if (std::abs(step) < 1e-17 * std::max(1.0, theta)) break;
    }
    const double z = std::cos(theta);
    const double s = std::sin(0.5 * theta);
    const auto [p, dp] = legendre(n, z);
    (void)p;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
    rule.complements[i] = rule.complements[n - 1 - i] = 2.0 * s * s;
  }
  if (n % 2 == 1) {
    rule.nodes[n / 2] = 0.0;
    rule.complements[n / 2] = 1.0;
  }
  return rule;
}

// Range of the double-exponential variable t = kDeRange * u; bounded ranges
// stop at r = 5, where the gap to either end is about 1e-101 of the half width.
constexpr double kDeRange = 5.5;
constexpr double kDeRangeFinite = 5.0;
constexpr double kExpSinhRange = 5.0;

// Maps u in (-1, 1) onto (a, inf); returns (offset from a, d offset / du).
std::pair<double, double> half_line(double u, InfiniteMap map, double scale, bool cluster_end) {
  if (map == InfiniteMap::rational && cluster_end) {
    // x = a + s exp(t - e^{-t}): double-exponential at a, exponential tail;
    // t = -5 puts the first node about 1e-67 s from a.
    const double t = kExpSinhRange * u;
    const double x = scale * std::exp(t - std::exp(-t));
    return {x, x * (1.0 + std::exp(-t)) * kExpSinhRange};
  }
  if (map == InfiniteMap::rational) {
    const double v = 0.5 * (1.0 + u);
    const double t = v / (1.0 - v);
    return {scale * t * t, 0.5 * 2.0 * scale * t / ((1.0 - v) * (1.0 - v))};
  }
  const double t = kDeRange * u;
  const double e = std::exp(0.5 * std::numbers::pi * std::sinh(t));
  return {scale * e, scale * e * 0.5 * std::numbers::pi * std::cosh(t) * kDeRange};
}

} // namespace

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre rule needs n >= 1");
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
  return it->second;
}

MappedNodes map_nodes(double lo, double hi, int n, InfiniteMap map, double center, double scale, bool cluster_ends) {
  if (!(lo < hi)) throw InvalidArgument("integration range must satisfy lo < hi");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("mapping scale must be positive");
  const QuadratureRule& rule = gauss_legendre(n);
  MappedNodes out;
  out.x.reserve(n);
  out.w.reserve(n);
  out.gap.reserve(n);
  out.end.reserve(n);
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  for (int i = 0; i < n; ++i) {
    const double u = rule.nodes[i];
    const double wu = rule.weights[i];
    double x = 0.0;
    double gap = INFINITY;
    signed char end = 0;
    double jac = 0.0;
    if (!lo_inf && !hi_inf) {
      const double h = 0.5 * (hi - lo);
      end = u < 0.0 ? -1 : 1;
      if (map == InfiniteMap::rational && !cluster_ends) {
        // 1 -+ sin(pi u/2) = 2 sin^2(pi (1 -+ u)/4), measured from the nearer end
        const double c = rule.complements[i];
        const double s = std::sin(0.25 * std::numbers::pi * c);
        gap = 2.0 * h * s * s;
        jac = h * 0.5 * std::numbers::pi * std::sin(0.5 * std::numbers::pi * c);
      } else {
        // 1 - tanh|a| = 2 / (1 + e^{2|a|}); sech^2 a = 4 e^{-2|a|} / (1 + e^{-2|a|})^2
        const double r = kDeRangeFinite * u;
        const double a = std::abs(0.5 * std::numbers::pi * std::sinh(r));
        const double e = std::exp(-2.0 * a);
        gap = h * 2.0 * e / (1.0 + e);
        jac = h * 0.5 * std::numbers::pi * kDeRangeFinite * std::cosh(r) * 4.0 * e / ((1.0 + e) * (1.0 + e));
      }
    } else if (lo_inf && hi_inf) {
      if (map == InfiniteMap::rational) {
        const double den = 1.0 - u * u;
        x = center + scale * u / den;
        jac = scale * (1.0 + u * u) / (den * den);
      } else {
        const double t = kDeRange * u;
        const double a = 0.5 * std::numbers::pi * std::sinh(t);
        x = center + scale * std::sinh(a);
        jac = scale * std::cosh(a) * 0.5 * std::numbers::pi * std::cosh(t) * kDeRange;
      }
    } else if (!lo_inf) {
      std::tie(gap, jac) = half_line(u, map, scale, cluster_ends);
      end = -1;
    } else {
      std::tie(gap, jac) = half_line(-u, map, scale, cluster_ends);
      end = 1;
    }
    if (end) x = end < 0 ? lo + gap : hi - gap;
    if (!std::isfinite(x) || !std::isfinite(jac) || !(jac > 0.0)) continue;
    out.x.push_back(x);
    out.w.push_back(wu * jac);
    out.gap.push_back(gap);
    out.end.push_back(end);
  }
  return out;
}

MappedNodes composite_nodes(const std::vector<double>& breaks, int n) {
  const QuadratureRule& rule = gauss_legendre(n);
  MappedNodes out;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double a = breaks[s];
    const double b = breaks[s + 1];
    if (!(a < b)) continue;
    const double m = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
      out.x.push_back(m + h * rule.nodes[i]);
      out.w.push_back(h * rule.weights[i]);
      out.gap.push_back(INFINITY);
      out.end.push_back(0);
    }
  }
  return out;
}

double integrate(const std::function<double(double)>& f, const MappedNodes& nodes) {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) s += nodes.w[i] * f(nodes.x[i]);
  return s;
}

} // namespace varbounds
