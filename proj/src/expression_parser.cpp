#include "varbounds/error.hpp"
#include "varbounds/smooth_function.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace varbounds {
namespace {

class Parser {
public:
  explicit Parser(const std::string& text) : text_(text) {}

  SmoothFunction parse() {
    SmoothFunction f = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidArgument("expression '" + text_ + "': " + what + " at position " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  SmoothFunction expr() {
    SmoothFunction acc = term();
    for (;;) {
      if (accept('+')) acc = acc + term();
      else if (accept('-')) acc = acc - term();
      else return acc;
    }
  }

  SmoothFunction term() {
    SmoothFunction acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        SmoothFunction den = unary();
        if (auto c = den.as_constant()) {
          if (*c == 0.0) fail("division by zero");
          acc = (1.0 / *c) * acc;
        } else if (auto aff = den.as_affine()) {
          acc = acc * SmoothFunction::power(aff->first, aff->second, -1.0);
        } else {
          pos_ = at;
          fail("divisor must be affine in x");
        }
      } else {
        return acc;
      }
    }
  }

  SmoothFunction unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  SmoothFunction power() {
    SmoothFunction base = atom();
    if (!accept('^')) return base;
    const std::size_t at = pos_;
    SmoothFunction expo = unary();
    if (auto m = expo.as_constant()) {
      if (auto c = base.as_constant()) return SmoothFunction::constant(std::pow(*c, *m));
      if (auto aff = base.as_affine()) return SmoothFunction::power(aff->first, aff->second, *m);
      if (*m >= 0 && *m == std::floor(*m) && *m <= 8) {
        SmoothFunction acc = SmoothFunction::constant(1.0);
        for (int i = 0; i < static_cast<int>(*m); ++i) acc = acc * base;
        return acc;
      }
      pos_ = at;
      fail("non-affine base needs a small non-negative integer exponent");
    }
    if (auto c = base.as_constant()) {
      auto aff = expo.as_affine();
      if (!aff) {
        pos_ = at;
        fail("exponent must be affine in x");
      }
      if (*c <= 0.0) fail("base of a variable exponent must be positive");
      const double lc = std::log(*c);
      return SmoothFunction::exp(lc * aff->first, lc * aff->second);
    }
    pos_ = at;
    fail("unsupported power");
  }

  SmoothFunction log_affine(const SmoothFunction& f, std::size_t at) {
    auto aff = f.as_affine();
    if (!aff) {
      pos_ = at;
      fail("log factors must be affine in x");
    }
    if (aff->first == 0.0) return SmoothFunction::constant(std::log(aff->second));
    return SmoothFunction::log(aff->first, aff->second);
  }

  // log(u1 * u2 / u3 ...) with affine u_i, expanded into a sum of logs.
  SmoothFunction log_of_quotient() {
    std::size_t at = pos_;
    SmoothFunction acc = log_affine(unary(), at);
    for (;;) {
      at = pos_;
      if (accept('*')) acc = acc + log_affine(unary(), at);
      else if (accept('/')) acc = acc - log_affine(unary(), at);
      else return acc;
    }
  }

  SmoothFunction affine_call(const std::string& name) {
    expect('(');
    const std::size_t at = pos_;
    SmoothFunction arg;
    try {
      arg = expr();
    } catch (const InvalidArgument&) {
      if (name != "log") throw;
      pos_ = at;
      SmoothFunction f = log_of_quotient();
      expect(')');
      return f;
    }
    expect(')');
    auto aff = arg.as_affine();
    if (!aff) {
      pos_ = at;
      if (name != "log") fail("argument of " + name + " must be affine in x");
      SmoothFunction f = log_of_quotient();
      expect(')');
      return f;
    }
    const auto [a, b] = *aff;
    if (name == "exp") return SmoothFunction::exp(a, b);
    if (name == "sin") return SmoothFunction::sin(a, b);
    if (name == "cos") return SmoothFunction::cos(a, b);
    return log_affine(arg, at);
  }

  SmoothFunction atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return SmoothFunction::constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "x") return SmoothFunction::identity();
      if (name == "pi") return SmoothFunction::constant(std::numbers::pi);
      if (name == "exp" || name == "sin" || name == "cos" || name == "log") return affine_call(name);
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    if (accept('(')) {
      SmoothFunction inner = expr();
      expect(')');
      return inner;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

} // namespace

SmoothFunction parse_expression(const std::string& text) { return Parser(text).parse(); }

} // namespace varbounds
