#include "varbounds/bounds.hpp"

#include "varbounds/error.hpp"

#include <algorithm>
#include <cmath>

namespace varbounds {

std::string to_string(Theorem t) { return t == Theorem::poincare ? "poincare" : "bessel"; }

Theorem theorem_from_string(const std::string& s) {
  if (s == "poincare") return Theorem::poincare;
  if (s == "bessel") return Theorem::bessel;
  throw InvalidArgument("unknown theorem '" + s + "' (expected poincare or bessel)");
}

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// prod_{j=first}^{last} (1 - j*delta), refusing vanishing factors.
double guarded_product(double delta, int first, int last, int k, double guard) {
  double prod = 1.0;
  for (int j = first; j <= last; ++j) {
    const double factor = 1.0 - j * delta;
    if (std::abs(factor) <= guard) throw SingularCoefficient(k, j, factor);
    prod *= factor;
  }
  return prod;
}

// Per-node evaluations shared by every matrix of one run.
struct Tables {
  std::vector<double> w;                                // probability weight per node
  std::vector<std::vector<std::vector<double>>> deriv;  // [k][i][m]: g_i^(k) or Delta^k g_i
  std::vector<std::vector<double>> qw;                  // [k][m]: q^k or q^[k]
  std::vector<bool> edge;                               // node among the last 10 of a truncated window
  double tail_mass = 0.0;
};

void check_order(int k) {
  if (k < 0) throw InvalidArgument("order must be non-negative");
}

Tables continuous_tables(const ContinuousIP& d, const FunctionTuple& g, int order, int nodes, InfiniteMap map,
                         bool need_q) {
  if (!g.all_smooth())
    throw InvalidArgument("continuous members need test functions with derivative representations");
  const MappedNodes pn = probability_nodes(d, nodes, map);
  const std::size_t m = pn.x.size();
  Tables t;
  t.w = pn.w;
  t.edge.assign(m, false);
  t.deriv.assign(order + 1, std::vector<std::vector<double>>(g.size(), std::vector<double>(m)));
  t.qw.assign(order + 1, std::vector<double>(m, 1.0));
  const Quadratic* q = need_q ? &d.quadratic() : nullptr;
  for (std::size_t node = 0; node < m; ++node) {
    const double x = pn.x[node];
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (int k = 0; k <= order; ++k) {
        double v = g[i].smooth().derivative(k, x);
        if (!std::isfinite(v)) {
          if (!on_end(d, x))
            throw NonFiniteIntegrand(x, "derivative " + std::to_string(k) + " of '" + g[i].label() + "'");
          t.w[node] = 0.0;
          v = 0.0;
        }
        t.deriv[k][i][node] = v;
      }
    }
    if (q) {
      const double qx = (*q)(x);
      for (int k = 1; k <= order; ++k) t.qw[k][node] = t.qw[k - 1][node] * qx;
    }
  }
  return t;
}

Tables discrete_tables(const DiscreteCO& d, const FunctionTuple& g, int order, double trunc_tol, bool need_q) {
  const LatticeWindow win = truncate_support(d, trunc_tol);
  const std::size_t m = static_cast<std::size_t>(win.hi - win.lo + 1);
  Tables t;
  t.tail_mass = win.tail_mass;
  t.w.resize(m);
  t.edge.assign(m, false);
  for (std::size_t node = 0; node < m; ++node) {
    t.w[node] = d.pmf(win.lo + static_cast<std::int64_t>(node));
    if (win.tail_mass > 0.0 && (node < 10 || m - node <= 10)) t.edge[node] = true;
  }
  t.qw.assign(order + 1, std::vector<double>(m, 1.0));
  if (need_q) {
    const Quadratic& q = d.quadratic();
    for (std::size_t node = 0; node < m; ++node) {
      const double x = static_cast<double>(win.lo + static_cast<std::int64_t>(node));
      for (int k = 1; k <= order; ++k) t.qw[k][node] = rising_q(q, k, x);
    }
  }
  // g_i on [lo, hi + order]; values past the support only meet zero weights
  // when the support is bounded above.
  t.deriv.assign(order + 1, std::vector<std::vector<double>>(g.size(), std::vector<double>(m)));
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<double> vals(m + order);
    for (std::size_t s = 0; s < vals.size(); ++s) vals[s] = g[i].at(win.lo + static_cast<std::int64_t>(s));
    const std::int64_t lo = win.lo;
    const LatticeFunction lookup = [&vals, lo](std::int64_t j) { return vals[static_cast<std::size_t>(j - lo)]; };
    for (int k = 0; k <= order; ++k) {
      for (std::size_t node = 0; node < m; ++node) {
        const double weight = t.w[node] * t.qw[k][node];
        if (weight == 0.0) {
          t.deriv[k][i][node] = 0.0;
          continue;
        }
        const std::int64_t j = lo + static_cast<std::int64_t>(node);
        const double v = forward_difference(lookup, k, j);
        if (!std::isfinite(v))
          throw NonFiniteIntegrand(static_cast<double>(j),
                                   "difference " + std::to_string(k) + " of '" + g[i].label() + "'");
        t.deriv[k][i][node] = v;
      }
    }
  }
  return t;
}

struct TablePair {
  Tables full;
  std::optional<Tables> half;  // continuous only
  Method method;
};

TablePair build_tables(const Distribution& d, const FunctionTuple& g, int order, const EngineConfig& cfg,
                       bool need_q) {
  cfg.validate();
  check_order(order);
  if (const auto* c = std::get_if<ContinuousIP>(&d)) {
    const bool table = !c->breakpoints().empty();
    TablePair tp{continuous_tables(*c, g, order, table ? 4 : cfg.quad_nodes, cfg.infinite_map, need_q),
                 continuous_tables(*c, g, order, table ? 2 : cfg.quad_nodes / 2, cfg.infinite_map, need_q),
                 Method::quadrature};
    return tp;
  }
  return TablePair{discrete_tables(std::get<DiscreteCO>(d), g, order, cfg.trunc_tol, need_q), std::nullopt,
                   Method::summation};
}

SymMatrix dispersion_from(const Tables& t, std::size_t p, double* edge_mag = nullptr) {
  std::vector<double> mean(p, 0.0);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t m = 0; m < t.w.size(); ++m) mean[i] += t.w[m] * t.deriv[0][i][m];
  SymMatrix out(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      double s = 0.0;
      for (std::size_t m = 0; m < t.w.size(); ++m) {
        const double v = (t.deriv[0][i][m] - mean[i]) * (t.deriv[0][j][m] - mean[j]);
        s += t.w[m] * v;
        if (edge_mag && t.edge[m]) *edge_mag = std::max(*edge_mag, std::abs(v));
      }
      out.at(i, j) = s;
    }
  }
  return out;
}

SymMatrix h_from(const Tables& t, std::size_t p, int k, double* edge_mag = nullptr) {
  SymMatrix out(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      double s = 0.0;
      for (std::size_t m = 0; m < t.w.size(); ++m) {
        const double v = t.qw[k][m] * t.deriv[k][i][m] * t.deriv[k][j][m];
        s += t.w[m] * v;
        if (edge_mag && t.edge[m]) *edge_mag = std::max(*edge_mag, std::abs(v));
      }
      out.at(i, j) = s;
    }
  }
  return out;
}

std::vector<double> b_vector_from(const Tables& t, std::size_t p, int k, double* edge_mag = nullptr) {
  std::vector<double> u(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t m = 0; m < t.w.size(); ++m) {
      const double v = t.qw[k][m] * t.deriv[k][i][m];
      u[i] += t.w[m] * v;
      if (edge_mag && t.edge[m]) *edge_mag = std::max(*edge_mag, std::abs(v));
    }
  }
  return u;
}

double q_moment_from(const Tables& t, int k) {
  double s = 0.0;
  for (std::size_t m = 0; m < t.w.size(); ++m) s += t.w[m] * t.qw[k][m];
  return s;
}

double max_gap(const SymMatrix& a, const SymMatrix& b) { return (a - b).max_abs(); }

double bessel_weight(double delta, int k, double q_moment, double guard) {
  return 1.0 / (factorial(k) * q_moment * guarded_product(delta, k - 1, 2 * k - 2, k, guard));
}

} // namespace

double poincare_coefficient(double delta, int k, double guard) {
  if (k < 1) throw InvalidArgument("coefficient order k must be >= 1");
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  return sign / (factorial(k) * guarded_product(delta, 0, k - 1, k, guard));
}

void check_coefficients(double delta, int n, const std::vector<Theorem>& theorems, double guard) {
  const bool want_p = std::find(theorems.begin(), theorems.end(), Theorem::poincare) != theorems.end();
  const bool want_b = std::find(theorems.begin(), theorems.end(), Theorem::bessel) != theorems.end();
  for (int k = 1; k <= n; ++k) {
    if (want_p) guarded_product(delta, 0, k - 1, k, guard);
    if (want_b) guarded_product(delta, k - 1, 2 * k - 2, k, guard);
  }
}

ExpectationResult q_weight_moment(const Distribution& d, int k, const EngineConfig& cfg) {
  check_order(k);
  const Quadratic& q = quadratic_of(d);
  if (const auto* c = std::get_if<ContinuousIP>(&d))
    return expect_continuous(*c, [&](double x) { return std::pow(q(x), k); }, cfg);
  return expect_discrete(std::get<DiscreteCO>(d),
                         [&](std::int64_t j) { return rising_q(q, k, static_cast<double>(j)); }, cfg);
}

BesselCoefficient bessel_coefficient(const Distribution& d, int k, const EngineConfig& cfg, double guard,
                                     double null_threshold) {
  if (k < 1) throw InvalidArgument("coefficient order k must be >= 1");
  BesselCoefficient c;
  c.q_moment = q_weight_moment(d, k, cfg).value;
  if (std::abs(c.q_moment) <= null_threshold) {
    c.null_term = true;
    return c;
  }
  c.weight = bessel_weight(quadratic_of(d).delta, k, c.q_moment, guard);
  return c;
}

SymMatrix dispersion_matrix(const Distribution& d, const FunctionTuple& g, const EngineConfig& cfg) {
  const TablePair tp = build_tables(d, g, 0, cfg, false);
  return dispersion_from(tp.full, g.size());
}

SymMatrix matrix_H(const Distribution& d, const FunctionTuple& g, int k, const EngineConfig& cfg) {
  const TablePair tp = build_tables(d, g, k, cfg, true);
  return h_from(tp.full, g.size(), k);
}

SymMatrix matrix_B(const Distribution& d, const FunctionTuple& g, int k, const EngineConfig& cfg) {
  const TablePair tp = build_tables(d, g, k, cfg, true);
  return SymMatrix::outer(b_vector_from(tp.full, g.size(), k));
}

SymMatrix matrix_S(const Distribution& d, const FunctionTuple& g, int n, const BoundsConfig& cfg) {
  BoundsConfig c = cfg;
  c.check_membership = false;
  return *compute_bounds(d, g, n, {Theorem::poincare}, c).S;
}

SymMatrix matrix_L(const Distribution& d, const FunctionTuple& g, int n, const BoundsConfig& cfg) {
  BoundsConfig c = cfg;
  c.check_membership = false;
  return *compute_bounds(d, g, n, {Theorem::bessel}, c).L;
}

SymMatrix matrix_A(const Distribution& d, const FunctionTuple& g, int n, const BoundsConfig& cfg) {
  BoundsConfig c = cfg;
  c.check_membership = false;
  return *compute_bounds(d, g, n, {Theorem::poincare}, c).A;
}

const TheoremVerdict* BoundReport::verdict(Theorem t) const {
  for (const auto& v : verdicts)
    if (v.theorem == t) return &v;
  return nullptr;
}

bool BoundReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const TheoremVerdict& v) { return v.pass; });
}

std::vector<TheoremVerdict> evaluate_verdicts(const BoundReport& r, double tol_factor) {
  const double tol = tol_factor * (1.0 + spectral_radius(r.D));
  std::vector<TheoremVerdict> out;
  if (r.A) {
    TheoremVerdict v;
    v.theorem = Theorem::poincare;
    v.spectrum = jacobi_eigenvalues(*r.A);
    const PsdVerdict psd = is_psd(*r.A, tol);
    v.pass = psd.holds;
    v.min_eigenvalue = psd.min_eigenvalue;
    v.tolerance = tol;
    out.push_back(std::move(v));
  }
  if (r.L) {
    TheoremVerdict v;
    v.theorem = Theorem::bessel;
    v.spectrum = jacobi_eigenvalues(r.D - *r.L);
    const PsdVerdict psd = loewner_leq(*r.L, r.D, tol);
    v.pass = psd.holds;
    v.min_eigenvalue = psd.min_eigenvalue;
    v.tolerance = tol;
    out.push_back(std::move(v));
  }
  return out;
}

BoundReport compute_bounds(const Distribution& d, const FunctionTuple& g, int n, const std::vector<Theorem>& theorems,
                           const BoundsConfig& cfg) {
  if (n < 1) throw InvalidArgument("bound order n must be >= 1");
  if (theorems.empty()) throw InvalidArgument("no theorem requested");
  const bool want_p = std::find(theorems.begin(), theorems.end(), Theorem::poincare) != theorems.end();
  const bool want_b = std::find(theorems.begin(), theorems.end(), Theorem::bessel) != theorems.end();
  const Quadratic& q = quadratic_of(d);

  // A vanishing factor is reported before any integration or class check.
  check_coefficients(q.delta, n, theorems, cfg.singular_guard);

  if (cfg.check_membership) {
    if (want_p) {
      ClassReport cr = check_class(d, g, n, FunctionClass::H);
      if (!cr.pass) {
        const auto& bad = *std::find_if(cr.entries.begin(), cr.entries.end(), [](const ClassEntry& e) { return !e.finite; });
        throw ClassMembershipError("function '" + g[bad.function].label() + "' fails " + bad.condition +
                                   " at k=" + std::to_string(bad.k) + ": " + bad.reason);
      }
    }
    if (want_b) {
      ClassReport cr = check_class(d, g, n, FunctionClass::B);
      if (!cr.pass) {
        const auto& bad = *std::find_if(cr.entries.begin(), cr.entries.end(), [](const ClassEntry& e) { return !e.finite; });
        throw ClassMembershipError("function '" + g[bad.function].label() + "' fails " + bad.condition +
                                   " at k=" + std::to_string(bad.k) + ": " + bad.reason);
      }
    }
  }

  const TablePair tp = build_tables(d, g, n, cfg.engine, true);
  const std::size_t p = g.size();

  BoundReport r;
  r.n = n;
  r.p = p;
  double edge = 0.0;
  r.D = dispersion_from(tp.full, p, &edge);
  double bracket = tp.half ? max_gap(r.D, dispersion_from(*tp.half, p)) : 0.0;

  r.H.reserve(n);
  r.B.reserve(n);
  for (int k = 1; k <= n; ++k) {
    r.H.push_back(h_from(tp.full, p, k, &edge));
    r.B.push_back(SymMatrix::outer(b_vector_from(tp.full, p, k, &edge)));
    if (tp.half) {
      bracket = std::max(bracket, max_gap(r.H.back(), h_from(*tp.half, p, k)));
      bracket = std::max(bracket, max_gap(r.B.back(), SymMatrix::outer(b_vector_from(*tp.half, p, k))));
    }
  }
  if (!tp.half) bracket = edge * tp.full.tail_mass;

  SymMatrix S(p), L(p);
  for (int k = 1; k <= n; ++k) {
    CoefficientRecord rec;
    rec.k = k;
    rec.q_moment = q_moment_from(tp.full, k);
    rec.null_term = std::abs(rec.q_moment) <= cfg.null_threshold;
    if (!rec.null_term) {
      if (want_p) {
        rec.poincare = poincare_coefficient(q.delta, k, cfg.singular_guard);
        S += *rec.poincare * r.H[k - 1];
      }
      if (want_b) {
        rec.bessel = bessel_weight(q.delta, k, rec.q_moment, cfg.singular_guard);
        L += *rec.bessel * r.B[k - 1];
      }
    }
    r.coefficients.push_back(rec);
  }
  if (want_p) {
    r.S = S;
    r.A = ((n % 2 == 0) ? 1.0 : -1.0) * (r.D - S);
  }
  if (want_b) r.L = L;

  r.provenance.distribution = name_of(d);
  r.provenance.functions = g.labels();
  r.provenance.engine = cfg.engine;
  r.provenance.tol_factor = cfg.tol_factor;
  r.provenance.method = to_string(tp.method);
  r.provenance.max_error_bracket = bracket;
  r.provenance.moments_finite = moment_finiteness(d, n).finite;

  r.verdicts = evaluate_verdicts(r, cfg.tol_factor);
  return r;
}

} // namespace varbounds
