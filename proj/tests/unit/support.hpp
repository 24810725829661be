#pragma once

#include "varbounds/bounds.hpp"
#include "varbounds/distribution.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace vbtest {

using namespace varbounds;

// Student-t with nu degrees of freedom: IP(0; 1/(nu-1), 0, nu/(nu-1)).
// Not part of the catalog; used to exercise delta > 0 on an unbounded support.
inline Distribution student_t(double nu) {
  ContinuousIP::Options opt;
  opt.scale = 1.0;
  opt.sampler = [nu](SplitMix64& rng) { return rng.normal() / std::sqrt(2.0 * rng.gamma(0.5 * nu) / nu); };
  const double lnorm =
      std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi);
  const double c = 1.0 / (nu - 1.0);
  return ContinuousIP(
      "student-t", 0.0, Quadratic(c, 0.0, nu * c), -INFINITY, INFINITY,
      [nu, lnorm](double x) { return std::exp(lnorm - 0.5 * (nu + 1.0) * std::log1p(x * x / nu)); }, opt);
}

// E[Z^k] for Z ~ N(0,1): (k-1)!! for even k, 0 for odd k.
inline double normal_moment(int k) {
  if (k % 2) return 0.0;
  double m = 1.0;
  for (int j = k - 1; j > 1; j -= 2) m *= j;
  return m;
}

inline TestFunction expr(const std::string& e) { return TestFunction(parse_expression(e), e); }

inline FunctionTuple tuple(std::initializer_list<const char*> exprs) {
  std::vector<TestFunction> fs;
  for (const char* e : exprs) fs.push_back(expr(e));
  return FunctionTuple(std::move(fs));
}

// Brute-force summation of phi(j) p(j) over j in [lo, hi], in long double.
template <typename Pmf, typename Phi>
double brute_sum(Pmf pmf, Phi phi, std::int64_t lo, std::int64_t hi) {
  long double s = 0.0L;
  for (std::int64_t j = lo; j <= hi; ++j) s += static_cast<long double>(pmf(j)) * phi(j);
  return static_cast<double>(s);
}

inline double poisson_pmf(double lambda, std::int64_t j) {
  // product form, independent of the library's lgamma form
  double p = std::exp(-lambda);
  for (std::int64_t i = 1; i <= j; ++i) p *= lambda / static_cast<double>(i);
  return p;
}

inline double binomial_pmf(int n, double th, std::int64_t j) {
  double c = 1.0;
  for (std::int64_t i = 1; i <= j; ++i) c = c * static_cast<double>(n - j + i) / static_cast<double>(i);
  return c * std::pow(th, static_cast<double>(j)) * std::pow(1.0 - th, static_cast<double>(n - j));
}

inline double max_abs_diff(const SymMatrix& a, const SymMatrix& b) { return (a - b).max_abs(); }

} // namespace vbtest
