#pragma once

#include "varbounds/quadratic.hpp"
#include "varbounds/smooth_function.hpp"

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace varbounds {

using LatticeFunction = std::function<double(std::int64_t)>;

/// Highest forward-difference order accepted; the binomial weights are
/// generated as an exact integer Pascal row.
inline constexpr int kMaxDifferenceOrder = 20;

/// k-th derivative of f at x (exact).
double derivative_value(const SmoothFunction& f, int k, double x);

/// Delta^k f(j) = sum_{i=0}^{k} (-1)^(k-i) C(k,i) f(j+i).
/// Throws InvalidArgument for k < 0 or k > kMaxDifferenceOrder.
double forward_difference(const LatticeFunction& f, int k, std::int64_t j);

/// Delta^k f(j) through k-fold application of Delta; used as a cross-check.
double iterated_forward_difference(const LatticeFunction& f, int k, std::int64_t j);

/// Row k of Pascal's triangle, exact in 64-bit integers for k <= 20.
std::vector<std::int64_t> pascal_row(int k);

/// q^[k](x) = q(x) q(x+1) ... q(x+k-1), with q^[0] = 1.
double rising_q(const Quadratic& q, int k, double x);

/// One entry g_i of a test-function tuple. A smooth entry serves both the
/// continuous case (derivatives) and the discrete case (point values at the
/// integers); a lattice entry serves only the discrete case.
class TestFunction {
public:
  TestFunction(SmoothFunction f, std::string label = {});
  TestFunction(LatticeFunction f, std::string label);

  bool is_smooth() const noexcept { return smooth_.has_value(); }
  /// Throws InvalidArgument for lattice-only entries.
  const SmoothFunction& smooth() const;

  double at(std::int64_t j) const { return lattice_(j); }
  const LatticeFunction& lattice() const noexcept { return lattice_; }
  const std::string& label() const noexcept { return label_; }

private:
  std::optional<SmoothFunction> smooth_;
  LatticeFunction lattice_;
  std::string label_;
};

/// The ordered functions g_1..g_p, p >= 1.
class FunctionTuple {
public:
  explicit FunctionTuple(std::vector<TestFunction> entries);
  FunctionTuple(std::initializer_list<TestFunction> entries)
      : FunctionTuple(std::vector<TestFunction>(entries)) {}

  std::size_t size() const noexcept { return entries_.size(); }
  const TestFunction& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  bool all_smooth() const noexcept;
  std::vector<std::string> labels() const;
  FunctionTuple subset(const std::vector<std::size_t>& indices) const;

private:
  std::vector<TestFunction> entries_;
};

} // namespace varbounds
