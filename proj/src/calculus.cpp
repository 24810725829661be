#include "varbounds/calculus.hpp"

#include "varbounds/error.hpp"

namespace varbounds {

double derivative_value(const SmoothFunction& f, int k, double x) { return f.derivative(k, x); }

std::vector<std::int64_t> pascal_row(int k) {
  if (k < 0 || k > kMaxDifferenceOrder)
    throw InvalidArgument("difference order must lie in [0, " + std::to_string(kMaxDifferenceOrder) + "]");
  std::vector<std::int64_t> row{1};
  for (int r = 1; r <= k; ++r) {
    std::vector<std::int64_t> next(r + 1, 1);
    for (int i = 1; i < r; ++i) next[i] = row[i - 1] + row[i];
    row = std::move(next);
  }
  return row;
}

double forward_difference(const LatticeFunction& f, int k, std::int64_t j) {
  const auto row = pascal_row(k);
  double s = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double term = static_cast<double>(row[i]) * f(j + i);
    s += ((k - i) % 2 == 0) ? term : -term;
  }
  return s;
}

double iterated_forward_difference(const LatticeFunction& f, int k, std::int64_t j) {
  if (k < 0) throw InvalidArgument("difference order must be non-negative");
  std::vector<double> v(k + 1);
  for (int i = 0; i <= k; ++i) v[i] = f(j + i);
  for (int level = 0; level < k; ++level)
    for (int i = 0; i + level < k; ++i) v[i] = v[i + 1] - v[i];
  return v[0];
}

double rising_q(const Quadratic& q, int k, double x) {
  if (k < 0) throw InvalidArgument("rising product order must be non-negative");
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= q(x + i);
  return r;
}

TestFunction::TestFunction(SmoothFunction f, std::string label)
    : smooth_(std::move(f)), label_(std::move(label)) {
  if (label_.empty()) label_ = smooth_->to_string();
  lattice_ = [g = *smooth_](std::int64_t j) { return g(static_cast<double>(j)); };
}

TestFunction::TestFunction(LatticeFunction f, std::string label)
    : lattice_(std::move(f)), label_(std::move(label)) {
  if (!lattice_) throw InvalidArgument("lattice function is empty");
}

const SmoothFunction& TestFunction::smooth() const {
  if (!smooth_) throw InvalidArgument("test function '" + label_ + "' has no derivative representation");
  return *smooth_;
}

FunctionTuple::FunctionTuple(std::vector<TestFunction> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw InvalidArgument("function tuple needs at least one entry");
}

bool FunctionTuple::all_smooth() const noexcept {
  for (const auto& e : entries_)
    if (!e.is_smooth()) return false;
  return true;
}

std::vector<std::string> FunctionTuple::labels() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.label());
  return out;
}

FunctionTuple FunctionTuple::subset(const std::vector<std::size_t>& indices) const {
  std::vector<TestFunction> picked;
  for (std::size_t i : indices) {
    if (i >= entries_.size()) throw InvalidArgument("function index out of range");
    picked.push_back(entries_[i]);
  }
  return FunctionTuple(std::move(picked));
}

} // namespace varbounds
