#include "varbounds/distribution.hpp"
#include "varbounds/error.hpp"
#include "varbounds/expectation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace varbounds {
namespace {

// (t-mu) weighted integral of the density over [lo, hi].
double centered_integral(const ContinuousIP& d, double lo, double hi, const InferenceConfig& cfg) {
  if (!(lo < hi)) return 0.0;
  MappedNodes nodes;
  if (!d.breakpoints().empty()) {
    std::vector<double> breaks{lo};
    for (double b : d.breakpoints())
      if (b > lo && b < hi) breaks.push_back(b);
    breaks.push_back(hi);
    nodes = composite_nodes(breaks, 4);
  } else {
    const double scale = std::isinf(lo) || std::isinf(hi) ? d.scale() : 1.0;
    nodes = map_nodes(lo, hi, cfg.quad_nodes, InfiniteMap::rational, d.mean(), scale);
  }
  const double mu = d.mean();
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) s += nodes.w[i] * (nodes.x[i] - mu) * d.density(nodes.x[i]);
  return s;
}

IdentitySamples continuous_samples(const ContinuousIP& d, const InferenceConfig& cfg) {
  if (cfg.grid_points < 8) throw InvalidArgument("inference grid needs at least 8 points");
  const double mu = d.mean();
  const double lo = std::isfinite(d.alpha()) ? d.alpha() : mu - 6.0 * d.scale();
  const double hi = std::isfinite(d.omega()) ? d.omega() : mu + 6.0 * d.scale();
  const double a = std::max(lo, d.alpha());
  const double b = std::min(hi, d.omega());
  const int m = cfg.grid_points;

  std::vector<double> xs, fs;
  double fmax = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = a + (b - a) * (i + 0.5) / m;
    const double f = d.density(x);
    xs.push_back(x);
    fs.push_back(f);
    if (std::isfinite(f)) fmax = std::max(fmax, f);
  }
  IdentitySamples out;
  for (int i = 0; i < m; ++i) {
    if (!(fs[i] >= cfg.density_floor * fmax) || !std::isfinite(fs[i]) || fs[i] <= 0.0) continue;
    const double x = xs[i];
    // Integrate from the nearer side; both agree because E[X] = mu.
    const double c = x <= mu ? -centered_integral(d, d.alpha(), x, cfg) : centered_integral(d, x, d.omega(), cfg);
    out.x.push_back(x);
    out.cumulative.push_back(c);
    out.density.push_back(fs[i]);
  }
  return out;
}

IdentitySamples discrete_samples(const DiscreteCO& d, const InferenceConfig& cfg) {
  const LatticeWindow w = truncate_support(d, cfg.trunc_tol);
  const std::size_t count = static_cast<std::size_t>(w.hi - w.lo + 1);
  const double mu = d.mean();
  std::vector<double> p(count), prefix(count), suffix(count);
  double pmax = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    p[i] = d.pmf(w.lo + static_cast<std::int64_t>(i));
    pmax = std::max(pmax, p[i]);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    acc += (mu - static_cast<double>(w.lo + static_cast<std::int64_t>(i))) * p[i];
    prefix[i] = acc;
  }
  acc = 0.0;
  for (std::size_t i = count; i-- > 0;) {
    suffix[i] = acc; // sum over k > j
    acc += (mu - static_cast<double>(w.lo + static_cast<std::int64_t>(i))) * p[i];
  }
  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < count; ++i)
    if (p[i] > 0.0 && p[i] >= cfg.density_floor * pmax) usable.push_back(i);
  if (usable.size() > cfg.max_lattice_points) {
    std::vector<std::size_t> thinned;
    const std::size_t m = cfg.max_lattice_points;
    for (std::size_t k = 0; k < m; ++k) thinned.push_back(usable[k * (usable.size() - 1) / (m - 1)]);
    usable = std::move(thinned);
  }
  IdentitySamples out;
  for (std::size_t i : usable) {
    const double j = static_cast<double>(w.lo + static_cast<std::int64_t>(i));
    out.x.push_back(j);
    out.cumulative.push_back(j <= mu ? prefix[i] : -suffix[i]);
    out.density.push_back(p[i]);
  }
  return out;
}

// Least squares for y ~ c0*t^2 + c1*t + c2 by Householder QR.
std::array<double, 3> fit_parabola(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t m = t.size();
  std::vector<std::array<double, 3>> a(m);
  std::vector<double> b = y;
  for (std::size_t i = 0; i < m; ++i) a[i] = {t[i] * t[i], t[i], 1.0};
  std::array<double, 3> diag{};
  double scale0 = 0.0;
  for (int c = 0; c < 3; ++c) {
    double norm = 0.0;
    for (std::size_t i = c; i < m; ++i) norm += a[i][c] * a[i][c];
    norm = std::sqrt(norm);
    if (c == 0) scale0 = norm;
    if (norm <= 1e-10 * scale0 || norm == 0.0) throw InvalidArgument("quadratic fit is rank deficient");
    const double alpha = a[c][c] > 0 ? -norm : norm;
    std::vector<double> v(m, 0.0);
    for (std::size_t i = c; i < m; ++i) v[i] = a[i][c];
    v[c] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = c; i < m; ++i) vnorm2 += v[i] * v[i];
    for (int cc = c; cc < 3; ++cc) {
      double dot = 0.0;
      for (std::size_t i = c; i < m; ++i) dot += v[i] * a[i][cc];
      for (std::size_t i = c; i < m; ++i) a[i][cc] -= 2.0 * dot / vnorm2 * v[i];
    }
    double dot = 0.0;
    for (std::size_t i = c; i < m; ++i) dot += v[i] * b[i];
    for (std::size_t i = c; i < m; ++i) b[i] -= 2.0 * dot / vnorm2 * v[i];
    diag[c] = a[c][c];
  }
  std::array<double, 3> x{};
  for (int c = 2; c >= 0; --c) {
    double s = b[c];
    for (int cc = c + 1; cc < 3; ++cc) s -= a[c][cc] * x[cc];
    x[c] = s / diag[c];
  }
  return x;
}

} // namespace

IdentitySamples identity_samples(const Distribution& d, const InferenceConfig& cfg) {
  if (const auto* c = std::get_if<ContinuousIP>(&d)) return continuous_samples(*c, cfg);
  return discrete_samples(std::get<DiscreteCO>(d), cfg);
}

QuadraticFit infer_quadratic(const Distribution& d, const InferenceConfig& cfg) {
  const IdentitySamples s = identity_samples(d, cfg);
  if (s.x.size() < 3) throw InvalidArgument("quadratic inference needs at least 3 points above the density floor");
  const auto [xmin, xmax] = std::minmax_element(s.x.begin(), s.x.end());
  const double c = 0.5 * (*xmin + *xmax);
  const double sc = 0.5 * (*xmax - *xmin);
  if (!(sc > 0.0)) throw InvalidArgument("quadratic fit is rank deficient");
  std::vector<double> t(s.x.size()), r(s.x.size());
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    t[i] = (s.x[i] - c) / sc;
    r[i] = s.cumulative[i] / s.density[i];
  }
  const auto [a2, a1, a0] = fit_parabola(t, r);
  const double delta = a2 / (sc * sc);
  const double beta = -2.0 * a2 * c / (sc * sc) + a1 / sc;
  const double gamma = a2 * c * c / (sc * sc) - a1 * c / sc + a0;

  QuadraticFit fit;
  fit.q = Quadratic(delta, beta, gamma);
  double total = 0.0;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const double res = std::abs(r[i] - fit.q(s.x[i]));
    fit.max_residual = std::max(fit.max_residual, res);
    total += res;
  }
  fit.mean_residual = total / static_cast<double>(s.x.size());
  fit.points = s.x.size();
  return fit;
}

double default_membership_tolerance(const Distribution& d) {
  if (const auto* c = std::get_if<ContinuousIP>(&d))
    return c->breakpoints().empty() ? kContinuousMembershipTol : kTabulatedMembershipTol;
  return kDiscreteMembershipTol;
}

MembershipReport verify_membership(const Distribution& d, std::optional<double> tolerance,
                                   const InferenceConfig& cfg) {
  const Quadratic& q = quadratic_of(d);
  const IdentitySamples s = identity_samples(d, cfg);
  MembershipReport rep;
  rep.tolerance = tolerance.value_or(default_membership_tolerance(d));
  double total = 0.0;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    const double res = std::abs(s.cumulative[i] / s.density[i] - q(s.x[i]));
    rep.max_residual = std::max(rep.max_residual, std::isnan(res) ? INFINITY : res);
    total += res;
  }
  rep.points = s.x.size();
  rep.mean_residual = rep.points ? total / static_cast<double>(rep.points) : 0.0;
  rep.pass = rep.points > 0 && rep.max_residual <= rep.tolerance;
  return rep;
}

MomentReport moment_finiteness(const Distribution& d, int n) {
  if (n < 1) throw InvalidArgument("moment order n must be >= 1");
  MomentReport rep;
  const bool bounded = std::visit([](const auto& x) { return x.bounded(); }, d);
  const double delta = has_quadratic(d) ? quadratic_of(d).delta : 0.0;
  if (!has_quadratic(d) && !bounded) {
    rep.analytic = true; // no rule available; defer to the numeric probe
  } else {
    rep.analytic = bounded || delta <= 0.0 || (2.0 * n < 1.0 + 1.0 / delta);
  }
  const double two_n = 2.0 * n;
  if (const auto* c = std::get_if<ContinuousIP>(&d)) {
    rep.numeric = probe_finiteness(*c, [two_n](double x) { return std::pow(std::abs(x), two_n); }).finite;
  } else {
    rep.numeric = probe_finiteness(std::get<DiscreteCO>(d), [two_n](std::int64_t j) {
                    return std::pow(std::abs(static_cast<double>(j)), two_n);
                  }).finite;
  }
  rep.finite = rep.analytic && rep.numeric;
  return rep;
}

} // namespace varbounds
