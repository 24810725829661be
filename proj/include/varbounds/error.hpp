#pragma once

#include <stdexcept>
#include <string>

namespace varbounds {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A factor (1 - j*delta) of a bound coefficient vanished, so the order-k
/// term of the bound is undefined for this family.
class SingularCoefficient : public Error {
public:
  SingularCoefficient(int order, int factor_index, double factor)
      : Error("singular coefficient at k=" + std::to_string(order) +
              ": factor (1 - j*delta) with j=" + std::to_string(factor_index) +
              " equals " + std::to_string(factor)),
        order_(order), factor_index_(factor_index) {}

  int order() const noexcept { return order_; }
  int factor_index() const noexcept { return factor_index_; }

private:
  int order_;
  int factor_index_;
};

/// A test function fails the integrability conditions of its class.
class ClassMembershipError : public Error {
public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
public:
  using Error::Error;
};

class NoSampler : public Error {
public:
  using Error::Error;
};

/// Integrand evaluated to inf/nan at a quadrature node or support point.
class NonFiniteIntegrand : public Error {
public:
  NonFiniteIntegrand(double node, const std::string& what)
      : Error("non-finite integrand at x=" + std::to_string(node) + ": " + what),
        node_(node) {}
  double node() const noexcept { return node_; }

private:
  double node_;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
};

} // namespace varbounds
