#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace varbounds {

/// Dense symmetric matrix stored as its packed upper triangle.
class SymMatrix {
public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t order, double fill = 0.0);

  /// Builds from a full row-major matrix, symmetrizing (M + M^t)/2. Throws
  /// InvalidArgument if the input is not square or its asymmetry exceeds
  /// asym_tol * (1 + max|M_ij|).
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows,
                             double asym_tol = 1e-10);
  static SymMatrix identity(std::size_t order);
  static SymMatrix diagonal(const std::vector<double>& diag);
  /// v v^t
  static SymMatrix outer(const std::vector<double>& v);

  std::size_t order() const noexcept { return order_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[index(i, j)]; }
  double& at(std::size_t i, std::size_t j) noexcept { return data_[index(i, j)]; }

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s) noexcept;

  double max_abs() const noexcept;
  double frobenius() const noexcept;
  double trace() const noexcept;
  /// c^t M c
  double quadratic_form(const std::vector<double>& c) const;

  std::vector<std::vector<double>> rows() const;
  bool all_finite() const noexcept;

private:
  std::size_t index(std::size_t i, std::size_t j) const noexcept {
    if (i > j) std::swap(i, j);
    return i * order_ - i * (i + 1) / 2 + j;
  }

  std::size_t order_ = 0;
  std::vector<double> data_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double s, SymMatrix a);

struct EigenDecomposition {
  std::vector<double> values;                       // ascending
  std::vector<std::vector<double>> vectors;         // vectors[m] pairs with values[m]; empty unless requested
  int sweeps = 0;
  double off_diagonal = 0.0;                        // Frobenius mass left off the diagonal
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// 1e-14 * ||M||_F or 50 sweeps elapse. Throws ConvergenceError at the cap
/// and InvalidArgument for order > 64 or non-finite entries.
EigenDecomposition jacobi_eigen(const SymMatrix& m, bool with_vectors = false);

std::vector<double> jacobi_eigenvalues(const SymMatrix& m);

double spectral_radius(const SymMatrix& m);

struct PsdVerdict {
  bool holds = false;
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;
};

/// M >= 0 within tol: min eigenvalue >= -tol.
PsdVerdict is_psd(const SymMatrix& m, double tol);

/// a <= b in the Loewner order within tol, i.e. is_psd(b - a, tol).
PsdVerdict loewner_leq(const SymMatrix& a, const SymMatrix& b, double tol);

} // namespace varbounds
