#include "varbounds/expectation.hpp"

#include "varbounds/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace varbounds {

namespace {

constexpr double kZ99 = 2.5758293035489004;
constexpr std::int64_t kMaxLatticePoints = 10'000'000;
// Floor of the quadrature bracket, in units of eps * sum |w phi|.
constexpr double kRoundoffFactor = 128.0;

double clamp_center(const ContinuousIP& d) { return d.mean(); }

// Scale of the half-line map: spread from the finite end toward the bulk.
double half_line_scale(const ContinuousIP& d) {
  if (std::isfinite(d.alpha()) && !std::isfinite(d.omega())) return std::max(d.mean() - d.alpha(), d.scale());
  if (!std::isfinite(d.alpha()) && std::isfinite(d.omega())) return std::max(d.omega() - d.mean(), d.scale());
  return d.scale();
}

double tail_weight(std::int64_t j) {
  const double a = 1.0 + std::abs(static_cast<double>(j));
  const double a2 = a * a;
  const double a4 = a2 * a2;
  return a4 * a4;
}

} // namespace

void EngineConfig::validate() const {
  if (quad_nodes < 10) throw InvalidArgument("quad_nodes must be >= 10");
  if (!(trunc_tol > 0.0 && trunc_tol <= 1e-6)) throw InvalidArgument("trunc_tol must lie in (0, 1e-6]");
  if (mc_samples < 2) throw InvalidArgument("mc_samples must be >= 2");
}

std::string to_string(Method m) {
  switch (m) {
  case Method::quadrature: return "quadrature";
  case Method::summation: return "summation";
  case Method::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

std::string to_string(InfiniteMap m) { return m == InfiniteMap::rational ? "rational" : "tanh"; }

namespace {

// Exponent e of f ~ gap^e at a finite end, from two gaps far below the width.
double end_exponent(const ContinuousIP& d, int end, double width) {
  const double x_of = end < 0 ? d.alpha() : d.omega();
  auto f = [&](double gap) { return d.density_near(x_of - end * gap, end, gap); };
  const double g1 = 1e-9 * width;
  const double g2 = 1e-6 * width;
  const double f1 = f(g1);
  const double f2 = f(g2);
  if (!(f1 > 0.0) || !(f2 > 0.0) || !std::isfinite(f1) || !std::isfinite(f2)) return 0.0;
  return std::log(f1 / f2) / std::log(g1 / g2);
}

} // namespace

bool on_end(const ContinuousIP& d, double x) { return x == d.alpha() || x == d.omega(); }

MappedNodes probability_nodes(const ContinuousIP& d, int n, InfiniteMap map) {
  MappedNodes raw;
  // Nodes closer to a singular end than cutoff[end] carry less than ~1e-17 of
  // the mass and are dropped.
  double cutoff[2] = {0.0, 0.0};
  if (!d.breakpoints().empty()) {
    std::vector<double> breaks = d.breakpoints();
    if (breaks.front() > d.alpha()) breaks.insert(breaks.begin(), d.alpha());
    if (breaks.back() < d.omega()) breaks.push_back(d.omega());
    raw = composite_nodes(breaks, n);
  } else {
    // An unbounded density at a finite end calls for double-exponential clustering there.
    const double width = d.bounded() ? 0.5 * (d.omega() - d.alpha()) : half_line_scale(d);
    bool singular = false;
    for (int end : {-1, 1}) {
      if (!std::isfinite(end < 0 ? d.alpha() : d.omega())) continue;
      const double e = end_exponent(d, end, width);
      if (e < -1e-3) {
        singular = true;
        if (e > -1.0) cutoff[end > 0] = width * std::pow(1e-17, 1.0 / (e + 1.0));
      }
    }
    raw = map_nodes(d.alpha(), d.omega(), n, map, clamp_center(d), half_line_scale(d), singular);
  }
  MappedNodes out;
  out.x.reserve(raw.x.size());
  out.w.reserve(raw.x.size());
  for (std::size_t i = 0; i < raw.x.size(); ++i) {
    const int end = raw.end[i];
    if (end && raw.gap[i] < cutoff[end > 0]) continue;
    const double f = d.density_near(raw.x[i], end, raw.gap[i]);
    if (!(f > 0.0)) continue;
    if (!std::isfinite(f)) throw NonFiniteIntegrand(raw.x[i], "density is not finite");
    out.x.push_back(raw.x[i]);
    out.w.push_back(raw.w[i] * f);
    out.gap.push_back(raw.gap[i]);
    out.end.push_back(raw.end[i]);
  }
  return out;
}

namespace {

// Tabulated members use a fixed composite rule per segment.
std::pair<int, int> node_counts(const ContinuousIP& d, const EngineConfig& cfg) {
  if (!d.breakpoints().empty()) return {4, 2};
  return {cfg.quad_nodes, cfg.quad_nodes / 2};
}

std::pair<double, double> weighted_sum(const ContinuousIP& d, const MappedNodes& nodes, const RealFunction& phi) {
  double s = 0.0;
  double mag = 0.0;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double v = phi(nodes.x[i]);
    if (!std::isfinite(v)) {
      if (on_end(d, nodes.x[i])) continue;
      throw NonFiniteIntegrand(nodes.x[i], "phi is not finite");
    }
    s += nodes.w[i] * v;
    mag += std::abs(nodes.w[i] * v);
  }
  return {s, mag};
}

} // namespace

ExpectationResult expect_continuous(const ContinuousIP& d, const RealFunction& phi, const EngineConfig& cfg,
                                    std::optional<double> bracket_ceiling) {
  cfg.validate();
  const auto [full_n, half_n] = node_counts(d, cfg);
  const auto [full, mag] = weighted_sum(d, probability_nodes(d, full_n, cfg.infinite_map), phi);
  const auto [half, mag_half] = weighted_sum(d, probability_nodes(d, half_n, cfg.infinite_map), phi);
  (void)mag_half;
  ExpectationResult r;
  r.value = full;
  r.error_bracket = std::max(std::abs(full - half), kRoundoffFactor * std::numeric_limits<double>::epsilon() * mag);
  r.method = Method::quadrature;
  r.detail = full_n;
  if (bracket_ceiling && r.error_bracket > *bracket_ceiling)
    throw Error("quadrature error bracket " + std::to_string(r.error_bracket) + " exceeds ceiling " +
                std::to_string(*bracket_ceiling));
  return r;
}

LatticeWindow truncate_support(const DiscreteCO& d, double trunc_tol) {
  if (!(trunc_tol > 0.0)) throw InvalidArgument("trunc_tol must be positive");
  LatticeWindow w;
  if (d.bounded()) {
    if (d.omega() - d.alpha() > kMaxLatticePoints)
      throw Error("support of '" + d.name() + "' exceeds 10^7 points");
    w.lo = d.alpha();
    w.hi = d.omega();
    return w;
  }
  const double mu = d.mean();
  std::int64_t start = static_cast<std::int64_t>(std::llround(mu));
  start = std::clamp(start, d.alpha(), d.omega());

  // Walks outward from start in direction step until the weighted tail
  // estimate p(next)/(1 - ratio) * (1+|j|)^8 falls below trunc_tol.
  auto walk = [&](int step, std::int64_t limit, double& tail) {
    std::int64_t j = start;
    for (std::int64_t count = 0;; ++count) {
      if (count > kMaxLatticePoints) throw Error("truncation of '" + d.name() + "' needs more than 10^7 terms");
      if (j == limit) {
        tail = 0.0;
        return j;
      }
      const double here = d.pmf(j);
      const double next = d.pmf(j + step);
      if (next == 0.0 && here == 0.0) {
        tail = 0.0;
        return j;
      }
      if (here > 0.0 && next < here) {
        const double ratio = next / here;
        const double bound = next / (1.0 - ratio);
        if (bound * tail_weight(j + step) < trunc_tol) {
          tail = bound;
          return j;
        }
      }
      j += step;
    }
  };

  double up = 0.0;
  double down = 0.0;
  w.hi = walk(+1, d.omega(), up);
  w.lo = walk(-1, d.alpha(), down);
  w.tail_mass = up + down;
  return w;
}

ExpectationResult expect_discrete(const DiscreteCO& d, const IntegerFunction& phi, const EngineConfig& cfg) {
  cfg.validate();
  const LatticeWindow w = truncate_support(d, cfg.trunc_tol);
  double s = 0.0;
  double edge = 0.0;
  for (std::int64_t j = w.lo; j <= w.hi; ++j) {
    const double p = d.pmf(j);
    if (p == 0.0) continue;
    const double v = phi(j);
    if (!std::isfinite(v)) throw NonFiniteIntegrand(static_cast<double>(j), "phi is not finite");
    s += p * v;
    if (j - w.lo < 10 || w.hi - j < 10) edge = std::max(edge, std::abs(v));
  }
  ExpectationResult r;
  r.value = s;
  r.error_bracket = edge * w.tail_mass;
  r.method = Method::summation;
  r.detail = w.tail_mass;
  return r;
}

ExpectationResult expect_mc(const Distribution& d, const RealFunction& phi, const EngineConfig& cfg) {
  cfg.validate();
  if (!has_sampler(d)) throw NoSampler("distribution '" + name_of(d) + "' has no sampler");
  SplitMix64 rng(cfg.mc_seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 1; i <= cfg.mc_samples; ++i) {
    const double x = std::visit(
        [&](const auto& dist) { return static_cast<double>(dist.sample(rng)); }, d);
    const double v = phi(x);
    if (!std::isfinite(v)) throw NonFiniteIntegrand(x, "phi is not finite at a sampled point");
    const double delta = v - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(cfg.mc_samples);
  const double sd = std::sqrt(m2 / (n - 1.0));
  ExpectationResult r;
  r.value = mean;
  r.error_bracket = kZ99 * sd / std::sqrt(n);
  r.method = Method::monte_carlo;
  r.detail = r.error_bracket;
  return r;
}

ExpectationResult expect(const Distribution& d, const RealFunction& phi, const EngineConfig& cfg) {
  if (const auto* c = std::get_if<ContinuousIP>(&d)) return expect_continuous(*c, phi, cfg);
  return expect_discrete(std::get<DiscreteCO>(d), [&](std::int64_t j) { return phi(static_cast<double>(j)); }, cfg);
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kShellRatio = 0.95;
constexpr int kShellWindow = 6;

struct ShellVerdict {
  bool finite = true;
  double total = 0.0;
  std::string reason;
};

// Decides from a sequence of non-negative shell contributions ordered toward
// the end being probed.
ShellVerdict judge_shells(const std::vector<double>& shells, const std::string& where) {
  ShellVerdict v;
  for (double s : shells) {
    if (!std::isfinite(s)) {
      v.finite = false;
      v.reason = "non-finite contribution near " + where;
      return v;
    }
    v.total += s;
  }
  // Only the outermost shells that still carry weight decide; an early bulge
  // (a pmf peaking far from the mean) is not divergence.
  const double tiny = 1e-15 * (1.0 + v.total);
  std::size_t last = shells.size();
  while (last > 0 && shells[last - 1] <= tiny) --last;
  if (last + kShellWindow <= shells.size() || last < 3) return v;
  for (std::size_t i = last - 2; i < last; ++i) {
    if (shells[i] > kShellRatio * shells[i - 1]) continue;
    return v;
  }
  v.finite = false;
  v.reason = "contributions near " + where + " do not decay (ratio " +
             std::to_string(shells[last - 1] / shells[last - 2]) + ")";
  return v;
}

double segment_integral(const ContinuousIP& d, const RealFunction& phi, double a, double b, int n) {
  const QuadratureRule& rule = gauss_legendre(n);
  const double m = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = m + h * rule.nodes[i];
    const double f = d.density(x);
    if (f == 0.0) continue;
    const double v = phi(x) * f;
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    s += h * rule.weights[i] * std::abs(v);
  }
  return s;
}

} // namespace

FinitenessProbe probe_finiteness(const ContinuousIP& d, const RealFunction& phi) {
  constexpr int kTailShells = 40;
  constexpr int kShellNodes = 32;
  FinitenessProbe probe;
  const double mu = d.mean();
  const double s = d.scale();

  auto fail = [&](const std::string& why) {
    probe.finite = false;
    probe.reason = why;
    return probe;
  };

  double body_lo, body_hi;
  std::vector<std::pair<std::string, std::vector<double>>> ends;

  // Lower end
  if (std::isfinite(d.alpha())) {
    const double h = 0.5 * (mu - d.alpha());
    body_lo = d.alpha() + h;
    std::vector<double> shells;
    const double floor = 1e-10 * std::max(1.0, std::abs(d.alpha()));
    for (double eps = h; eps * 0.5 >= floor; eps *= 0.5)
      shells.push_back(segment_integral(d, phi, d.alpha() + 0.5 * eps, d.alpha() + eps, kShellNodes));
    ends.emplace_back("the lower endpoint", std::move(shells));
  } else {
    body_lo = mu - s;
    std::vector<double> shells;
    for (int i = 0; i < kTailShells; ++i)
      shells.push_back(segment_integral(d, phi, mu - s * std::ldexp(1.0, i + 1), mu - s * std::ldexp(1.0, i), kShellNodes));
    ends.emplace_back("-infinity", std::move(shells));
  }
  // Upper end
  if (std::isfinite(d.omega())) {
    const double h = 0.5 * (d.omega() - mu);
    body_hi = d.omega() - h;
    std::vector<double> shells;
    const double floor = 1e-10 * std::max(1.0, std::abs(d.omega()));
    for (double eps = h; eps * 0.5 >= floor; eps *= 0.5)
      shells.push_back(segment_integral(d, phi, d.omega() - eps, d.omega() - 0.5 * eps, kShellNodes));
    ends.emplace_back("the upper endpoint", std::move(shells));
  } else {
    body_hi = mu + s;
    std::vector<double> shells;
    for (int i = 0; i < kTailShells; ++i)
      shells.push_back(segment_integral(d, phi, mu + s * std::ldexp(1.0, i), mu + s * std::ldexp(1.0, i + 1), kShellNodes));
    ends.emplace_back("+infinity", std::move(shells));
  }

  const double body = segment_integral(d, phi, body_lo, body_hi, 128);
  if (!std::isfinite(body)) return fail("non-finite integrand inside the support");
  probe.truncated_value = body;
  for (const auto& [where, shells] : ends) {
    if (shells.size() < static_cast<std::size_t>(kShellWindow) + 1) continue;
    ShellVerdict v = judge_shells(shells, where);
    if (!v.finite) return fail(v.reason);
    probe.truncated_value += v.total;
  }
  probe.finite = true;
  return probe;
}

FinitenessProbe probe_finiteness(const DiscreteCO& d, const IntegerFunction& phi) {
  FinitenessProbe probe;
  const std::int64_t start =
      std::clamp(static_cast<std::int64_t>(std::llround(d.mean())), d.alpha(), d.omega());
  auto term = [&](std::int64_t j) {
    const double p = d.pmf(j);
    if (p == 0.0) return 0.0;
    return std::abs(phi(j)) * p;
  };

  if (d.bounded()) {
    double s = 0.0;
    for (std::int64_t j = d.alpha(); j <= d.omega(); ++j) s += term(j);
    probe.finite = std::isfinite(s);
    probe.truncated_value = s;
    if (!probe.finite) probe.reason = "non-finite term on a finite support";
    return probe;
  }

  // Dyadic blocks away from the mean toward each unbounded end.
  auto blocks = [&](int dir, std::int64_t limit, double& total) -> std::optional<std::string> {
    std::vector<double> shells;
    std::int64_t a = start;
    std::int64_t visited = 0;
    for (int i = 0; i < 60; ++i) {
      const std::int64_t len = std::int64_t{1} << std::min(i, 40);
      double s = 0.0;
      for (std::int64_t t = 0; t < len; ++t) {
        if (a == limit) break;
        a += dir;
        s += term(a);
        if (++visited > kMaxLatticePoints) return "probe exceeded 10^7 terms without a verdict";
      }
      shells.push_back(s);
      if (a == limit) break;
      // A pmf that has underflowed to zero for a whole block has settled.
      if (shells.size() > static_cast<std::size_t>(kShellWindow) && s == 0.0) break;
    }
    if (shells.size() <= static_cast<std::size_t>(kShellWindow)) {
      for (double s : shells) total += s;
      return std::nullopt;
    }
    ShellVerdict v = judge_shells(shells, dir > 0 ? "+infinity" : "-infinity");
    total += v.total;
    if (!v.finite) return v.reason;
    return std::nullopt;
  };

  double total = term(start);
  if (d.omega() == DiscreteCO::kPosInf) {
    if (auto why = blocks(+1, d.omega(), total)) {
      probe.reason = *why;
      return probe;
    }
  } else {
    for (std::int64_t j = start + 1; j <= d.omega(); ++j) total += term(j);
  }
  if (d.alpha() == DiscreteCO::kNegInf) {
    if (auto why = blocks(-1, d.alpha(), total)) {
      probe.reason = *why;
      return probe;
    }
  } else {
    for (std::int64_t j = start - 1; j >= d.alpha(); --j) total += term(j);
  }
  probe.finite = std::isfinite(total);
  probe.truncated_value = total;
  if (!probe.finite) probe.reason = "non-finite terms";
  return probe;
}

} // namespace varbounds
