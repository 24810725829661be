#include "varbounds/distribution.hpp"
#include "varbounds/error.hpp"
#include "varbounds/expectation.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace varbounds {
namespace {

class Params {
public:
  Params(std::string family, const ParamMap& given, std::initializer_list<std::string> allowed)
      : family_(std::move(family)), given_(given) {
    const std::set<std::string> ok(allowed);
    for (const auto& [k, v] : given_) {
      if (!ok.count(k)) throw InvalidArgument(family_ + ": unknown parameter '" + k + "'");
      if (!std::isfinite(v)) throw InvalidArgument(family_ + ": parameter '" + k + "' must be finite");
    }
  }

  double get(const std::string& key, std::optional<double> fallback = {}) const {
    auto it = given_.find(key);
    if (it != given_.end()) return it->second;
    if (fallback) return *fallback;
    throw InvalidArgument(family_ + ": missing parameter '" + key + "'");
  }

  double positive(const std::string& key, std::optional<double> fallback = {}) const {
    const double v = get(key, fallback);
    if (!(v > 0.0)) throw InvalidArgument(family_ + ": parameter '" + key + "' must be > 0");
    return v;
  }

  double probability(const std::string& key) const {
    const double v = get(key);
    if (!(v > 0.0 && v < 1.0)) throw InvalidArgument(family_ + ": parameter '" + key + "' must lie in (0, 1)");
    return v;
  }

  std::int64_t integer(const std::string& key, std::int64_t min_value) const {
    const double v = get(key);
    if (v != std::floor(v) || v < static_cast<double>(min_value) || v > 1e9)
      throw InvalidArgument(family_ + ": parameter '" + key + "' must be an integer >= " + std::to_string(min_value));
    return static_cast<std::int64_t>(v);
  }

private:
  std::string family_;
  const ParamMap& given_;
};

double lchoose(double n, double k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

DiscreteCO attach_inversion_sampler(DiscreteCO d) {
  const LatticeWindow w = truncate_support(d, 1e-15);
  auto pmf = [d](std::int64_t j) { return d.pmf(j); };
  return d.with_sampler(inversion_sampler(pmf, w.lo, w.hi));
}

Distribution normal(const ParamMap& pm) {
  Params p("normal", pm, {"mean", "var"});
  const double mu = p.get("mean", 0.0);
  const double var = p.positive("var", 1.0);
  const double sd = std::sqrt(var);
  ContinuousIP::Options opt;
  opt.scale = sd;
  opt.sampler = [mu, sd](SplitMix64& rng) { return mu + sd * rng.normal(); };
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * var);
  return ContinuousIP(
      "normal", mu, Quadratic(0.0, 0.0, var), -INFINITY, INFINITY,
      [mu, var, norm](double x) { return norm * std::exp(-0.5 * (x - mu) * (x - mu) / var); }, std::move(opt));
}

Distribution gamma(const ParamMap& pm) {
  Params p("gamma", pm, {"shape", "scale"});
  const double a = p.positive("shape");
  const double s = p.positive("scale", 1.0);
  ContinuousIP::Options opt;
  opt.scale = s * std::sqrt(a);
  opt.sampler = [a, s](SplitMix64& rng) { return s * rng.gamma(a); };
  const double lnorm = std::lgamma(a) + a * std::log(s);
  return ContinuousIP(
      "gamma", a * s, Quadratic(0.0, s, 0.0), 0.0, INFINITY,
      [a, s, lnorm](double x) { return std::exp((a - 1.0) * std::log(x) - x / s - lnorm); }, std::move(opt));
}

Distribution beta(const ParamMap& pm) {
  Params p("beta", pm, {"a", "b"});
  const double a = p.positive("a");
  const double b = p.positive("b");
  ContinuousIP::Options opt;
  opt.sampler = [a, b](SplitMix64& rng) {
    const double x = rng.gamma(a);
    const double y = rng.gamma(b);
    return x / (x + y);
  };
  const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  opt.end_density = [a, b, lbeta](int end, double gap) {
    const double lo_exp = end < 0 ? a - 1.0 : b - 1.0;
    const double hi_exp = end < 0 ? b - 1.0 : a - 1.0;
    return std::exp(lo_exp * std::log(gap) + hi_exp * std::log1p(-gap) - lbeta);
  };
  const double c = 1.0 / (a + b);
  return ContinuousIP(
      "beta", a / (a + b), Quadratic(-c, c, 0.0), 0.0, 1.0,
      [a, b, lbeta](double x) { return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lbeta); },
      std::move(opt));
}

Distribution poisson(const ParamMap& pm) {
  Params p("poisson", pm, {"lambda"});
  const double lambda = p.positive("lambda");
  const double ll = std::log(lambda);
  return attach_inversion_sampler(DiscreteCO(
      "poisson", lambda, Quadratic(0.0, 0.0, lambda), 0, DiscreteCO::kPosInf,
      [lambda, ll](std::int64_t j) { return std::exp(j * ll - lambda - std::lgamma(j + 1.0)); }));
}

Distribution binomial(const ParamMap& pm) {
  Params p("binomial", pm, {"n", "p"});
  const std::int64_t n = p.integer("n", 1);
  const double th = p.probability("p");
  const double dn = static_cast<double>(n);
  return attach_inversion_sampler(DiscreteCO(
      "binomial", dn * th, Quadratic(0.0, -th, dn * th), 0, n, [dn, th](std::int64_t j) {
        return std::exp(lchoose(dn, static_cast<double>(j)) + j * std::log(th) + (dn - j) * std::log1p(-th));
      }));
}

Distribution negative_binomial(const ParamMap& pm) {
  Params p("negative-binomial", pm, {"r", "p"});
  const double r = p.positive("r");
  const double th = p.probability("p");
  const double c = (1.0 - th) / th;
  return attach_inversion_sampler(DiscreteCO(
      "negative-binomial", r * c, Quadratic(0.0, c, r * c), 0, DiscreteCO::kPosInf, [r, th](std::int64_t j) {
        return std::exp(std::lgamma(j + r) - std::lgamma(r) - std::lgamma(j + 1.0) + r * std::log(th) +
                        j * std::log1p(-th));
      }));
}

Distribution hypergeometric(const ParamMap& pm) {
  Params p("hypergeometric", pm, {"population", "successes", "draws"});
  const std::int64_t m = p.integer("population", 1);
  const std::int64_t k = p.integer("successes", 0);
  const std::int64_t n = p.integer("draws", 0);
  if (k > m || n > m) throw InvalidArgument("hypergeometric: successes and draws must not exceed population");
  const double dm = static_cast<double>(m);
  const double dk = static_cast<double>(k);
  const double dn = static_cast<double>(n);
  const std::int64_t lo = std::max<std::int64_t>(0, n + k - m);
  const std::int64_t hi = std::min(k, n);
  const double lden = lchoose(dm, dn);
  return attach_inversion_sampler(DiscreteCO(
      "hypergeometric", dn * dk / dm, Quadratic(1.0 / dm, -(dk + dn) / dm, dk * dn / dm), lo, hi,
      [dm, dk, dn, lden](std::int64_t j) {
        const double x = static_cast<double>(j);
        return std::exp(lchoose(dk, x) + lchoose(dm - dk, dn - x) - lden);
      }));
}

} // namespace

std::vector<std::string> catalog_names() {
  return {"normal", "gamma", "beta", "poisson", "binomial", "negative-binomial", "hypergeometric"};
}

Distribution catalog(const std::string& name, const ParamMap& params) {
  if (name == "normal") return normal(params);
  if (name == "gamma") return gamma(params);
  if (name == "beta") return beta(params);
  if (name == "poisson") return poisson(params);
  if (name == "binomial") return binomial(params);
  if (name == "negative-binomial") return negative_binomial(params);
  if (name == "hypergeometric") return hypergeometric(params);
  throw InvalidArgument("unknown distribution '" + name + "'");
}

} // namespace varbounds
