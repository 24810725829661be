#include "varbounds/error.hpp"
#include "varbounds/linalg.hpp"
#include "varbounds/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace varbounds;

namespace {

// Determinant by cofactor expansion; the oracle for det(M - lambda I).
double cofactor_det(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  double det = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<double>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<double> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    det += (c % 2 ? -1.0 : 1.0) * a[0][c] * cofactor_det(minor);
  }
  return det;
}

SymMatrix random_symmetric(std::size_t n, SplitMix64& rng) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m.at(i, j) = 2.0 * rng.uniform() - 1.0;
  return m;
}

} // namespace

TEST_CASE("packed storage and algebra") {
  SymMatrix m = SymMatrix::from_rows({{2, 1}, {1, 3}});
  CHECK(m.order() == 2);
  CHECK(m(0, 1) == 1.0);
  CHECK(m(1, 0) == 1.0);
  CHECK(m.trace() == 5.0);
  CHECK(m.quadratic_form({1, -1}) == doctest::Approx(3.0));
  const SymMatrix o = SymMatrix::outer({1, 2});
  CHECK(o(0, 1) == 2.0);
  CHECK(o(1, 1) == 4.0);
  CHECK((m - m).max_abs() == 0.0);
  CHECK((2.0 * m)(1, 1) == 6.0);
  CHECK_THROWS_AS(SymMatrix::from_rows({{1, 2}, {0, 1}}), InvalidArgument);
  CHECK_THROWS_AS(SymMatrix::from_rows({{1, 2, 3}, {2, 1, 0}}), InvalidArgument);
  CHECK_THROWS_AS(m += SymMatrix(3), InvalidArgument);
}

TEST_CASE("2x2 closed form") {
  const double a = 2.0, b = 0.7, c = -1.0;
  const auto ev = jacobi_eigenvalues(SymMatrix::from_rows({{a, b}, {b, c}}));
  const double mid = 0.5 * (a + c);
  const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  CHECK(ev[0] == doctest::Approx(mid - rad).epsilon(1e-14));
  CHECK(ev[1] == doctest::Approx(mid + rad).epsilon(1e-14));
}

TEST_CASE("eigenvalues annihilate the characteristic determinant") {
  SplitMix64 rng(11);
  for (std::size_t n : {3u, 4u, 5u}) {
    const SymMatrix m = random_symmetric(n, rng);
    const auto ev = jacobi_eigenvalues(m);
    CHECK(std::is_sorted(ev.begin(), ev.end()));
    double sum = 0.0;
    for (double lambda : ev) {
      auto rows = m.rows();
      for (std::size_t i = 0; i < n; ++i) rows[i][i] -= lambda;
      CHECK(std::abs(cofactor_det(rows)) < 1e-11);
      sum += lambda;
    }
    CHECK(sum == doctest::Approx(m.trace()).epsilon(1e-12));
  }
}

TEST_CASE("eigenvectors reconstruct the matrix") {
  SplitMix64 rng(5);
  for (std::size_t n : {1u, 2u, 6u, 12u}) {
    const SymMatrix m = random_symmetric(n, rng);
    const EigenDecomposition e = jacobi_eigen(m, true);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0, dot = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          s += e.values[k] * e.vectors[k][i] * e.vectors[k][j];
          dot += e.vectors[i][k] * e.vectors[j][k];
        }
        CHECK(s == doctest::Approx(m(i, j)).epsilon(1e-12).scale(1.0));
        CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("degenerate and diagonal inputs") {
  const auto ev = jacobi_eigenvalues(SymMatrix::diagonal({3, -1, 2}));
  CHECK(ev == std::vector<double>{-1, 2, 3});
  const auto z = jacobi_eigenvalues(SymMatrix(4));
  CHECK(std::all_of(z.begin(), z.end(), [](double v) { return v == 0.0; }));
  const auto r1 = jacobi_eigenvalues(SymMatrix::outer({1, 1, 1}));
  CHECK(r1[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(r1[2] == doctest::Approx(3.0));
  CHECK_THROWS_AS(jacobi_eigenvalues(SymMatrix(65)), InvalidArgument);
  SymMatrix bad(2);
  bad.at(0, 1) = NAN;
  CHECK_THROWS_AS(jacobi_eigenvalues(bad), InvalidArgument);
}

TEST_CASE("psd and loewner verdicts") {
  const SymMatrix rank1 = SymMatrix::outer({1, -2});
  CHECK(is_psd(rank1, 1e-12).holds);
  CHECK(spectral_radius(rank1) == doctest::Approx(5.0));
  const SymMatrix indefinite = SymMatrix::from_rows({{1, 2}, {2, 1}});
  const PsdVerdict v = is_psd(indefinite, 1e-6);
  CHECK_FALSE(v.holds);
  CHECK(v.min_eigenvalue == doctest::Approx(-1.0));
  CHECK(loewner_leq(SymMatrix::identity(2), 2.0 * SymMatrix::identity(2), 0.0).holds);
  CHECK_FALSE(loewner_leq(2.0 * SymMatrix::identity(2), SymMatrix::identity(2), 0.5).holds);
  CHECK(loewner_leq(2.0 * SymMatrix::identity(2), SymMatrix::identity(2), 1.0).holds);
}
