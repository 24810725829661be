#include "support.hpp"

#include "varbounds/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace varbounds;
using namespace vbtest;

namespace {

std::vector<Distribution> every_member() {
  return {catalog("normal", {{"mean", -1.0}, {"var", 2.5}}),
          catalog("gamma", {{"shape", 2.5}, {"scale", 0.5}}),
          catalog("beta", {{"a", 2.0}, {"b", 3.0}}),
          catalog("beta", {{"a", 0.5}, {"b", 0.5}}),
          catalog("beta", {{"a", 5.0}, {"b", 1.0}}),
          catalog("poisson", {{"lambda", 3.0}}),
          catalog("binomial", {{"n", 15}, {"p", 0.35}}),
          catalog("negative-binomial", {{"r", 2.5}, {"p", 0.6}}),
          catalog("hypergeometric", {{"population", 30}, {"successes", 12}, {"draws", 9}}),
          student_t(5.0)};
}

} // namespace

TEST_CASE("catalog validation") {
  CHECK_THROWS_AS(catalog("cauchy"), InvalidArgument);
  CHECK_THROWS_AS(catalog("beta", {{"a", 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(catalog("beta", {{"a", -1.0}, {"b", 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(catalog("poisson", {{"lambda", 1.0}, {"mu", 2.0}}), InvalidArgument);
  CHECK_THROWS_AS(catalog("binomial", {{"n", 2.5}, {"p", 0.5}}), InvalidArgument);
  CHECK_THROWS_AS(catalog("binomial", {{"n", 4}, {"p", 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(catalog("hypergeometric", {{"population", 5}, {"successes", 6}, {"draws", 1}}),
                  InvalidArgument);
  CHECK(catalog_names().size() == 7);
}

TEST_CASE("densities and pmfs are normalized") {
  for (const auto& d : every_member()) {
    INFO(name_of(d));
    const ExpectationResult one = expect(d, [](double) { return 1.0; });
    CHECK(one.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(expect(d, [](double x) { return x; }).value == doctest::Approx(mean_of(d)).scale(1.0).epsilon(1e-10));
  }
}

TEST_CASE("every shipped quadratic satisfies its defining identity") {
  for (const auto& d : every_member()) {
    INFO(name_of(d));
    const MembershipReport m = verify_membership(d);
    CHECK(m.pass);
    CHECK(m.points >= 3);
    CHECK(m.tolerance == (is_discrete(d) ? kDiscreteMembershipTol : kContinuousMembershipTol));
  }
}

TEST_CASE("quadratic inference recovers the shipped q") {
  for (const auto& d : every_member()) {
    INFO(name_of(d));
    const QuadraticFit fit = infer_quadratic(d);
    CHECK(normalized_distance(fit.q, quadratic_of(d)) < 1e-6);
  }
  // Derived forms: binomial q = p(n - x), hypergeometric (K - x)(N - x)/M
  const QuadraticFit b = infer_quadratic(catalog("binomial", {{"n", 10}, {"p", 0.3}}));
  CHECK(b.q.delta == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(b.q.beta == doctest::Approx(-0.3).epsilon(1e-9));
  CHECK(b.q.gamma == doctest::Approx(3.0).epsilon(1e-9));
  const QuadraticFit h = infer_quadratic(catalog("hypergeometric", {{"population", 20}, {"successes", 7}, {"draws", 5}}));
  CHECK(h.q.delta == doctest::Approx(1.0 / 20).epsilon(1e-9));
  CHECK(h.q.beta == doctest::Approx(-12.0 / 20).epsilon(1e-9));
  CHECK(h.q.gamma == doctest::Approx(35.0 / 20).epsilon(1e-9));
}

TEST_CASE("identity samples reproduce the cumulative integral") {
  // Normal(0,1): C(x) = f(x), so C/f = 1 everywhere.
  const IdentitySamples s = identity_samples(catalog("normal"));
  for (std::size_t i = 0; i < s.x.size(); ++i) CHECK(s.cumulative[i] / s.density[i] == doctest::Approx(1.0));
  // Poisson: prefix sums by hand
  const Distribution p = catalog("poisson", {{"lambda", 2.0}});
  const IdentitySamples ps = identity_samples(p);
  for (std::size_t i = 0; i < ps.x.size(); ++i) {
    const auto j = static_cast<std::int64_t>(ps.x[i]);
    // nearer side: prefix sum below the mean, minus the suffix sum above it
    double c = 0.0;
    if (ps.x[i] <= 2.0)
      for (std::int64_t k = 0; k <= j; ++k) c += (2.0 - double(k)) * poisson_pmf(2.0, k);
    else
      for (std::int64_t k = j + 1; k <= 200; ++k) c -= (2.0 - double(k)) * poisson_pmf(2.0, k);
    CHECK(ps.cumulative[i] == doctest::Approx(c).scale(1e-300).epsilon(1e-9));
  }
}

TEST_CASE("corrupted quadratics are rejected") {
  const Distribution bad = with_quadratic(catalog("poisson", {{"lambda", 2.0}}), Quadratic(0.0, 0.25, 2.0));
  const MembershipReport m = verify_membership(bad);
  CHECK_FALSE(m.pass);
  CHECK(m.max_residual > 1.0);
  const Distribution slightly = with_quadratic(catalog("normal"), Quadratic(0.0, 0.0, 1.0 + 1e-6));
  CHECK_FALSE(verify_membership(slightly).pass);
  CHECK(verify_membership(slightly, 1e-5).pass);
  CHECK_THROWS_AS(verify_membership(with_quadratic(catalog("normal"), std::nullopt)), InvalidArgument);
}

TEST_CASE("moment finiteness") {
  // delta = 0.3: 2n < 1 + 1/0.3 holds for n = 2, fails for n = 3
  const Distribution t = student_t(1.0 + 1.0 / 0.3);
  CHECK(quadratic_of(t).delta == doctest::Approx(0.3));
  const MomentReport two = moment_finiteness(t, 2);
  CHECK(two.finite);
  CHECK(two.analytic);
  CHECK(two.numeric);
  const MomentReport three = moment_finiteness(t, 3);
  CHECK_FALSE(three.finite);
  CHECK_FALSE(three.analytic);
  CHECK_FALSE(three.numeric);
  CHECK(moment_finiteness(catalog("normal"), 8).finite);
  CHECK(moment_finiteness(catalog("gamma", {{"shape", 0.3}}), 5).finite);
  // delta > 0 with bounded support: every moment exists
  CHECK(moment_finiteness(catalog("hypergeometric", {{"population", 30}, {"successes", 12}, {"draws", 9}}), 6).finite);
  CHECK_THROWS_AS(moment_finiteness(catalog("normal"), 0), InvalidArgument);
}

TEST_CASE("samplers match the moments") {
  for (const auto& d : every_member()) {
    if (name_of(d) == "student-t") continue;
    INFO(name_of(d));
    EngineConfig cfg;
    cfg.mc_samples = 100000;
    const auto mc = expect_mc(d, [](double x) { return x; }, cfg);
    CHECK(std::abs(mc.value - mean_of(d)) <= 4 * mc.error_bracket);
    const double var = expect(d, [&](double x) { return (x - mean_of(d)) * (x - mean_of(d)); }).value;
    const auto mc2 = expect_mc(d, [&](double x) { return (x - mean_of(d)) * (x - mean_of(d)); }, cfg);
    CHECK(std::abs(mc2.value - var) <= 4 * mc2.error_bracket);
  }
}
