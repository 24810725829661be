#include "varbounds/linalg.hpp"

#include "varbounds/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace varbounds {

SymMatrix::SymMatrix(std::size_t order, double fill)
    : order_(order), data_(order * (order + 1) / 2, fill) {}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows, double asym_tol) {
  const std::size_t p = rows.size();
  double scale = 0.0;
  for (const auto& r : rows) {
    if (r.size() != p) throw InvalidArgument("matrix is not square");
    for (double v : r) scale = std::max(scale, std::abs(v));
  }
  SymMatrix m(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      if (std::abs(rows[i][j] - rows[j][i]) > asym_tol * (1.0 + scale))
        throw InvalidArgument("matrix asymmetry exceeds tolerance at (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
      m.at(i, j) = 0.5 * (rows[i][j] + rows[j][i]);
    }
  }
  return m;
}

SymMatrix SymMatrix::identity(std::size_t order) {
  SymMatrix m(order);
  for (std::size_t i = 0; i < order; ++i) m.at(i, i) = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.at(i, i) = diag[i];
  return m;
}

SymMatrix SymMatrix::outer(const std::vector<double>& v) {
  SymMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i; j < v.size(); ++j) m.at(i, j) = v[i] * v[j];
  return m;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (other.order_ != order_) throw InvalidArgument("matrix order mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  if (other.order_ != order_) throw InvalidArgument("matrix order mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) noexcept {
  for (double& v : data_) v *= s;
  return *this;
}

double SymMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double SymMatrix::frobenius() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t j = 0; j < order_; ++j) s += (*this)(i, j) * (*this)(i, j);
  return std::sqrt(s);
}

double SymMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < order_; ++i) t += (*this)(i, i);
  return t;
}

double SymMatrix::quadratic_form(const std::vector<double>& c) const {
  if (c.size() != order_) throw InvalidArgument("vector length does not match matrix order");
  double s = 0.0;
  for (std::size_t i = 0; i < order_; ++i) {
    s += (*this)(i, i) * c[i] * c[i];
    for (std::size_t j = i + 1; j < order_; ++j) s += 2.0 * (*this)(i, j) * c[i] * c[j];
  }
  return s;
}

std::vector<std::vector<double>> SymMatrix::rows() const {
  std::vector<std::vector<double>> r(order_, std::vector<double>(order_));
  for (std::size_t i = 0; i < order_; ++i)
    for (std::size_t j = 0; j < order_; ++j) r[i][j] = (*this)(i, j);
  return r;
}

bool SymMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

EigenDecomposition jacobi_eigen(const SymMatrix& m, bool with_vectors) {
  constexpr int kMaxSweeps = 50;
  const std::size_t p = m.order();
  if (p > 64) throw InvalidArgument("jacobi_eigen supports order <= 64");
  if (!m.all_finite()) throw InvalidArgument("matrix has non-finite entries");

  auto a = m.rows();
  std::vector<std::vector<double>> v;
  if (with_vectors) {
    v.assign(p, std::vector<double>(p, 0.0));
    for (std::size_t i = 0; i < p; ++i) v[i][i] = 1.0;
  }

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) s += 2.0 * a[i][j] * a[i][j];
    return std::sqrt(s);
  };

  const double target = 1e-14 * m.frobenius();
  EigenDecomposition out;
  double off = off_norm();
  int sweep = 0;
  while (off > target && off > 0.0) {
    if (sweep == kMaxSweeps)
      throw ConvergenceError("Jacobi iteration did not converge after 50 sweeps; off-diagonal residual " +
                             std::to_string(off));
    ++sweep;
    for (std::size_t i = 0; i + 1 < p; ++i) {
      for (std::size_t j = i + 1; j < p; ++j) {
        const double aij = a[i][j];
        if (aij == 0.0) continue;
        // Rotation angle from the stable tangent formula.
        const double theta = (a[j][j] - a[i][i]) / (2.0 * aij);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < p; ++r) {
          const double ari = a[r][i];
          const double arj = a[r][j];
          a[r][i] = c * ari - s * arj;
          a[r][j] = s * ari + c * arj;
        }
        for (std::size_t r = 0; r < p; ++r) {
          const double air = a[i][r];
          const double ajr = a[j][r];
          a[i][r] = c * air - s * ajr;
          a[j][r] = s * air + c * ajr;
        }
        a[i][j] = a[j][i] = 0.0;
        if (with_vectors) {
          for (std::size_t r = 0; r < p; ++r) {
            const double vri = v[r][i];
            const double vrj = v[r][j];
            v[r][i] = c * vri - s * vrj;
            v[r][j] = s * vri + c * vrj;
          }
        }
      }
    }
    off = off_norm();
  }

  std::vector<std::size_t> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) { return a[x][x] < a[y][y]; });
  out.values.reserve(p);
  for (std::size_t idx : perm) out.values.push_back(a[idx][idx]);
  if (with_vectors) {
    out.vectors.reserve(p);
    for (std::size_t idx : perm) {
      std::vector<double> col(p);
      for (std::size_t r = 0; r < p; ++r) col[r] = v[r][idx];
      out.vectors.push_back(std::move(col));
    }
  }
  out.sweeps = sweep;
  out.off_diagonal = off;
  return out;
}

std::vector<double> jacobi_eigenvalues(const SymMatrix& m) { return jacobi_eigen(m).values; }

double spectral_radius(const SymMatrix& m) {
  if (m.order() == 0) return 0.0;
  const auto ev = jacobi_eigenvalues(m);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

PsdVerdict is_psd(const SymMatrix& m, double tol) {
  PsdVerdict v;
  v.tolerance = tol;
  v.min_eigenvalue = m.order() == 0 ? 0.0 : jacobi_eigenvalues(m).front();
  v.holds = v.min_eigenvalue >= -tol;
  return v;
}

PsdVerdict loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol) {
  if (a.order() != b.order()) throw InvalidArgument("loewner_leq: matrix order mismatch");
  return is_psd(b - a, tol);
}

} // namespace varbounds
