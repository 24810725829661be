#include "varbounds/smooth_function.hpp"

#include "varbounds/error.hpp"

#include <cmath>
#include <sstream>
#include <variant>

namespace varbounds {
namespace detail {

enum class Primitive { exp, sin, cos, log, power };

struct PolyNode {
  std::vector<double> coeffs; // ascending powers
};

struct PrimitiveNode {
  Primitive kind;
  double a;
  double b;
  double m; // exponent, power only
};

struct SumNode {
  std::vector<std::pair<double, std::shared_ptr<const FunctionNode>>> terms;
  double constant = 0.0;
};

struct ProductNode {
  std::shared_ptr<const FunctionNode> lhs;
  std::shared_ptr<const FunctionNode> rhs;
};

struct FunctionNode {
  std::variant<PolyNode, PrimitiveNode, SumNode, ProductNode> body;
};

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double poly_derivative(const std::vector<double>& c, int k, double x) {
  const int deg = static_cast<int>(c.size()) - 1;
  if (k > deg) return 0.0;
  double acc = 0.0;
  for (int i = deg; i >= k; --i) {
    double fall = 1.0; // i! / (i-k)!
    for (int t = 0; t < k; ++t) fall *= static_cast<double>(i - t);
    acc = acc * x + c[i] * fall;
  }
  return acc;
}

double primitive_derivative(const PrimitiveNode& p, int k, double x) {
  const double u = p.a * x + p.b;
  const double ak = std::pow(p.a, k);
  switch (p.kind) {
  case Primitive::exp:
    return ak * std::exp(u);
  case Primitive::sin:
    switch (k % 4) {
    case 0: return ak * std::sin(u);
    case 1: return ak * std::cos(u);
    case 2: return -ak * std::sin(u);
    default: return -ak * std::cos(u);
    }
  case Primitive::cos:
    switch (k % 4) {
    case 0: return ak * std::cos(u);
    case 1: return -ak * std::sin(u);
    case 2: return -ak * std::cos(u);
    default: return ak * std::sin(u);
    }
  case Primitive::log: {
    if (k == 0) return std::log(u);
    // (-1)^(k-1) (k-1)! a^k / u^k
    double fact = 1.0;
    for (int t = 2; t < k; ++t) fact *= t;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    return sign * fact * ak / std::pow(u, k);
  }
  case Primitive::power: {
    double fall = 1.0;
    for (int t = 0; t < k; ++t) fall *= (p.m - t);
    if (fall == 0.0) return 0.0;
    return fall * ak * std::pow(u, p.m - k);
  }
  }
  return 0.0;
}

double node_derivative(const FunctionNode& node, int k, double x) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PolyNode>) {
          return poly_derivative(n.coeffs, k, x);
        } else if constexpr (std::is_same_v<T, PrimitiveNode>) {
          return primitive_derivative(n, k, x);
        } else if constexpr (std::is_same_v<T, SumNode>) {
          double s = (k == 0) ? n.constant : 0.0;
          for (const auto& [c, child] : n.terms) s += c * node_derivative(*child, k, x);
          return s;
        } else {
          double s = 0.0;
          for (int i = 0; i <= k; ++i)
            s += binomial(k, i) * node_derivative(*n.lhs, i, x) * node_derivative(*n.rhs, k - i, x);
          return s;
        }
      },
      node.body);
}

std::optional<std::vector<double>> node_polynomial(const FunctionNode& node) {
  return std::visit(
      [&](const auto& n) -> std::optional<std::vector<double>> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PolyNode>) {
          return n.coeffs;
        } else if constexpr (std::is_same_v<T, PrimitiveNode>) {
          if (n.kind != Primitive::power || n.m < 0 || n.m != std::floor(n.m) || n.m > 64)
            return std::nullopt;
          // (a x + b)^m by binomial expansion
          const int m = static_cast<int>(n.m);
          std::vector<double> c(m + 1);
          for (int i = 0; i <= m; ++i) c[i] = binomial(m, i) * std::pow(n.a, i) * std::pow(n.b, m - i);
          return c;
        } else if constexpr (std::is_same_v<T, SumNode>) {
          std::vector<double> acc{n.constant};
          for (const auto& [c, child] : n.terms) {
            auto p = node_polynomial(*child);
            if (!p) return std::nullopt;
            if (p->size() > acc.size()) acc.resize(p->size(), 0.0);
            for (std::size_t i = 0; i < p->size(); ++i) acc[i] += c * (*p)[i];
          }
          return acc;
        } else {
          auto l = node_polynomial(*n.lhs);
          auto r = node_polynomial(*n.rhs);
          if (!l || !r) return std::nullopt;
          std::vector<double> acc(l->size() + r->size() - 1, 0.0);
          for (std::size_t i = 0; i < l->size(); ++i)
            for (std::size_t j = 0; j < r->size(); ++j) acc[i + j] += (*l)[i] * (*r)[j];
          return acc;
        }
      },
      node.body);
}

void write_number(std::ostream& os, double v) { os << v; }

void write_affine(std::ostream& os, double a, double b) {
  os << "(";
  write_number(os, a);
  os << "*x";
  if (b != 0.0) {
    os << (b < 0 ? " - " : " + ");
    write_number(os, std::abs(b));
  }
  os << ")";
}

void write_node(std::ostream& os, const FunctionNode& node) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PolyNode>) {
          os << "(";
          bool first = true;
          for (std::size_t i = 0; i < n.coeffs.size(); ++i) {
            if (n.coeffs[i] == 0.0 && n.coeffs.size() > 1) continue;
            if (!first) os << " + ";
            first = false;
            write_number(os, n.coeffs[i]);
            if (i >= 1) os << "*x";
            if (i >= 2) os << "^" << i;
          }
          if (first) os << "0";
          os << ")";
        } else if constexpr (std::is_same_v<T, PrimitiveNode>) {
          switch (n.kind) {
          case Primitive::exp: os << "exp"; break;
          case Primitive::sin: os << "sin"; break;
          case Primitive::cos: os << "cos"; break;
          case Primitive::log: os << "log"; break;
          case Primitive::power: break;
          }
          write_affine(os, n.a, n.b);
          if (n.kind == Primitive::power) os << "^" << n.m;
        } else if constexpr (std::is_same_v<T, SumNode>) {
          os << "(";
          bool first = true;
          for (const auto& [c, child] : n.terms) {
            if (!first) os << " + ";
            first = false;
            write_number(os, c);
            os << "*";
            write_node(os, *child);
          }
          if (n.constant != 0.0 || first) {
            if (!first) os << " + ";
            write_number(os, n.constant);
          }
          os << ")";
        } else {
          write_node(os, *n.lhs);
          os << "*";
          write_node(os, *n.rhs);
        }
      },
      node.body);
}

} // namespace
} // namespace detail

using detail::FunctionNode;

namespace {

std::shared_ptr<const FunctionNode> make_node(auto body) {
  return std::make_shared<const FunctionNode>(FunctionNode{std::move(body)});
}

void trim(std::vector<double>& c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.empty()) c.push_back(0.0);
}

void check_affine(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidArgument("affine argument must be finite");
}

} // namespace

SmoothFunction::SmoothFunction() : SmoothFunction(make_node(detail::PolyNode{{0.0}}), kDefaultMaxOrder) {}

SmoothFunction::SmoothFunction(std::shared_ptr<const FunctionNode> node, int max_order)
    : node_(std::move(node)), max_order_(max_order) {}

SmoothFunction SmoothFunction::polynomial(std::vector<double> coeffs) {
  for (double c : coeffs)
    if (!std::isfinite(c)) throw InvalidArgument("polynomial coefficients must be finite");
  trim(coeffs);
  return SmoothFunction(make_node(detail::PolyNode{std::move(coeffs)}), kDefaultMaxOrder);
}

SmoothFunction SmoothFunction::constant(double c) { return polynomial({c}); }
SmoothFunction SmoothFunction::identity() { return polynomial({0.0, 1.0}); }

SmoothFunction SmoothFunction::exp(double a, double b) {
  check_affine(a, b);
  return SmoothFunction(make_node(detail::PrimitiveNode{detail::Primitive::exp, a, b, 0.0}), kDefaultMaxOrder);
}

SmoothFunction SmoothFunction::sin(double a, double b) {
  check_affine(a, b);
  return SmoothFunction(make_node(detail::PrimitiveNode{detail::Primitive::sin, a, b, 0.0}), kDefaultMaxOrder);
}

SmoothFunction SmoothFunction::cos(double a, double b) {
  check_affine(a, b);
  return SmoothFunction(make_node(detail::PrimitiveNode{detail::Primitive::cos, a, b, 0.0}), kDefaultMaxOrder);
}

SmoothFunction SmoothFunction::log(double a, double b) {
  check_affine(a, b);
  if (a == 0.0) throw InvalidArgument("log argument must depend on x");
  return SmoothFunction(make_node(detail::PrimitiveNode{detail::Primitive::log, a, b, 0.0}), kDefaultMaxOrder);
}

SmoothFunction SmoothFunction::power(double a, double b, double m) {
  check_affine(a, b);
  if (!std::isfinite(m)) throw InvalidArgument("exponent must be finite");
  if (m >= 0 && m == std::floor(m) && m <= 64) {
    SmoothFunction f(make_node(detail::PrimitiveNode{detail::Primitive::power, a, b, m}), kDefaultMaxOrder);
    return polynomial(*f.polynomial_coefficients());
  }
  return SmoothFunction(make_node(detail::PrimitiveNode{detail::Primitive::power, a, b, m}), kDefaultMaxOrder);
}

double SmoothFunction::derivative(int k, double x) const {
  if (k < 0) throw InvalidArgument("derivative order must be non-negative");
  if (k > max_order_)
    throw InvalidArgument("derivative order " + std::to_string(k) + " exceeds declared max order " +
                          std::to_string(max_order_));
  return detail::node_derivative(*node_, k, x);
}

SmoothFunction SmoothFunction::with_max_order(int k) const {
  if (k < 0) throw InvalidArgument("max order must be non-negative");
  return SmoothFunction(node_, k);
}

std::optional<std::vector<double>> SmoothFunction::polynomial_coefficients() const {
  auto c = detail::node_polynomial(*node_);
  if (c) trim(*c);
  return c;
}

std::optional<std::pair<double, double>> SmoothFunction::as_affine() const {
  auto c = polynomial_coefficients();
  if (!c || c->size() > 2) return std::nullopt;
  return std::make_pair(c->size() == 2 ? (*c)[1] : 0.0, (*c)[0]);
}

std::optional<double> SmoothFunction::as_constant() const {
  auto c = polynomial_coefficients();
  if (!c || c->size() > 1) return std::nullopt;
  return (*c)[0];
}

std::string SmoothFunction::to_string() const {
  std::ostringstream os;
  os.precision(10);
  detail::write_node(os, *node_);
  return os.str();
}

SmoothFunction operator+(const SmoothFunction& f, const SmoothFunction& g) {
  const int order = std::min(f.max_order_, g.max_order_);
  auto pf = f.polynomial_coefficients();
  auto pg = g.polynomial_coefficients();
  if (pf && pg) {
    if (pf->size() < pg->size()) pf->resize(pg->size(), 0.0);
    for (std::size_t i = 0; i < pg->size(); ++i) (*pf)[i] += (*pg)[i];
    return SmoothFunction::polynomial(std::move(*pf)).with_max_order(order);
  }
  detail::SumNode sum;
  for (const SmoothFunction* h : {&f, &g}) {
    if (auto c = h->as_constant()) {
      sum.constant += *c;
    } else if (const auto* s = std::get_if<detail::SumNode>(&h->node_->body)) {
      sum.terms.insert(sum.terms.end(), s->terms.begin(), s->terms.end());
      sum.constant += s->constant;
    } else {
      sum.terms.emplace_back(1.0, h->node_);
    }
  }
  return SmoothFunction(make_node(std::move(sum)), order);
}

SmoothFunction operator*(double c, const SmoothFunction& f) {
  if (!std::isfinite(c)) throw InvalidArgument("scale factor must be finite");
  if (auto p = f.polynomial_coefficients()) {
    for (double& v : *p) v *= c;
    return SmoothFunction::polynomial(std::move(*p)).with_max_order(f.max_order_);
  }
  detail::SumNode sum;
  if (const auto* s = std::get_if<detail::SumNode>(&f.node_->body)) {
    for (const auto& [w, child] : s->terms) sum.terms.emplace_back(c * w, child);
    sum.constant = c * s->constant;
  } else {
    sum.terms.emplace_back(c, f.node_);
  }
  return SmoothFunction(make_node(std::move(sum)), f.max_order_);
}

SmoothFunction operator-(const SmoothFunction& f) { return -1.0 * f; }
SmoothFunction operator-(const SmoothFunction& f, const SmoothFunction& g) { return f + (-1.0 * g); }

SmoothFunction operator*(const SmoothFunction& f, const SmoothFunction& g) {
  const int order = std::min(f.max_order_, g.max_order_);
  if (auto c = f.as_constant()) return (*c * g).with_max_order(order);
  if (auto c = g.as_constant()) return (*c * f).with_max_order(order);
  auto pf = f.polynomial_coefficients();
  auto pg = g.polynomial_coefficients();
  if (pf && pg) {
    std::vector<double> acc(pf->size() + pg->size() - 1, 0.0);
    for (std::size_t i = 0; i < pf->size(); ++i)
      for (std::size_t j = 0; j < pg->size(); ++j) acc[i + j] += (*pf)[i] * (*pg)[j];
    return SmoothFunction::polynomial(std::move(acc)).with_max_order(order);
  }
  return SmoothFunction(make_node(detail::ProductNode{f.node_, g.node_}), order);
}

} // namespace varbounds
