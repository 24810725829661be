#include "varbounds/bounds.hpp"
#include "varbounds/error.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

namespace varbounds {

namespace {

constexpr double kZ99 = 2.5758293035489004;

struct Moments {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;

  void add(double v) {
    ++count;
    const double d = v - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (v - mean);
  }
  double half_width() const {
    if (count < 2) return 0.0;
    return kZ99 * std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
  }
};

// derivs[k][i] at one draw, and q weights qw[k]
struct Draw {
  std::vector<std::vector<double>> derivs;
  std::vector<double> qw;
};

Draw evaluate(const Distribution& d, const FunctionTuple& g, int n, SplitMix64& rng) {
  Draw out;
  out.derivs.assign(n + 1, std::vector<double>(g.size()));
  out.qw.assign(n + 1, 1.0);
  if (const auto* c = std::get_if<ContinuousIP>(&d)) {
    const double x = c->sample(rng);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (int k = 0; k <= n; ++k) out.derivs[k][i] = g[i].smooth().derivative(k, x);
    const double qx = c->quadratic()(x);
    for (int k = 1; k <= n; ++k) out.qw[k] = out.qw[k - 1] * qx;
  } else {
    const auto& dd = std::get<DiscreteCO>(d);
    const std::int64_t j = dd.sample(rng);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (int k = 0; k <= n; ++k) out.derivs[k][i] = forward_difference(g[i].lattice(), k, j);
    for (int k = 1; k <= n; ++k) out.qw[k] = rising_q(dd.quadratic(), k, static_cast<double>(j));
  }
  return out;
}

// u with B = u u^t, up to a global sign
std::vector<double> factor_rank_one(const SymMatrix& b) {
  const std::size_t p = b.order();
  std::size_t r = 0;
  for (std::size_t i = 1; i < p; ++i)
    if (b(i, i) > b(r, r)) r = i;
  std::vector<double> u(p, 0.0);
  if (b(r, r) <= 0.0) return u;
  const double s = std::sqrt(b(r, r));
  for (std::size_t i = 0; i < p; ++i) u[i] = b(i, r) / s;
  return u;
}

} // namespace

McCheck mc_cross_check(const Distribution& d, const FunctionTuple& g, const BoundReport& report,
                       const EngineConfig& cfg, double slack) {
  cfg.validate();
  if (!has_sampler(d)) throw NoSampler("no sampler for '" + name_of(d) + "'");
  if (report.p != g.size()) throw InvalidArgument("report and function tuple disagree on p");
  const std::size_t p = g.size();
  const int n = report.n;

  std::vector<Moments> first(p);
  std::vector<Moments> cross(p * p);                               // raw E[g_i g_j]
  std::vector<std::vector<Moments>> h(n + 1, std::vector<Moments>(p * p));
  std::vector<std::vector<Moments>> u(n + 1, std::vector<Moments>(p));
  std::vector<std::vector<double>> g0(cfg.mc_samples, std::vector<double>(p));

  SplitMix64 rng(cfg.mc_seed);
  for (std::size_t s = 0; s < cfg.mc_samples; ++s) {
    const Draw draw = evaluate(d, g, n, rng);
    for (std::size_t i = 0; i < p; ++i) {
      g0[s][i] = draw.derivs[0][i];
      first[i].add(draw.derivs[0][i]);
    }
    for (int k = 1; k <= n; ++k) {
      for (std::size_t i = 0; i < p; ++i) {
        u[k][i].add(draw.qw[k] * draw.derivs[k][i]);
        for (std::size_t j = i; j < p; ++j) h[k][i * p + j].add(draw.qw[k] * draw.derivs[k][i] * draw.derivs[k][j]);
      }
    }
  }
  // covariance through centred products, so the interval reflects their spread
  for (const auto& row : g0)
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i; j < p; ++j) cross[i * p + j].add((row[i] - first[i].mean) * (row[j] - first[j].mean));

  McCheck out;
  out.slack = slack;
  auto record = [&](std::string quantity, int k, std::size_t i, std::size_t j, double exact, const Moments& m) {
    McDeviation dev{std::move(quantity), k, i, j, exact, m.mean, m.half_width(), false};
    const double gap = std::abs(dev.estimate - exact);
    const double floor = 1e-12 * (1.0 + std::abs(exact));
    dev.within = gap <= slack * dev.half_width + floor;
    out.max_deviation = std::max(out.max_deviation, gap);
    if (dev.half_width > 0.0) out.max_ratio = std::max(out.max_ratio, gap / (slack * dev.half_width));
    out.entries.push_back(std::move(dev));
  };

  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) record("D", 0, i, j, report.D(i, j), cross[i * p + j]);
  const int kmax = std::min<int>(n, static_cast<int>(report.H.size()));
  for (int k = 1; k <= kmax; ++k) {
    const SymMatrix& hk = report.H[static_cast<std::size_t>(k - 1)];
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i; j < p; ++j) record("H", k, i, j, hk(i, j), h[k][i * p + j]);
    if (static_cast<std::size_t>(k) <= report.B.size()) {
      std::vector<double> exact = factor_rank_one(report.B[static_cast<std::size_t>(k - 1)]);
      double align = 0.0;
      for (std::size_t i = 0; i < p; ++i) align += exact[i] * u[k][i].mean;
      if (align < 0.0)
        for (double& v : exact) v = -v;
      for (std::size_t i = 0; i < p; ++i) record("u", k, i, i, exact[i], u[k][i]);
    }
  }
  out.pass = std::all_of(out.entries.begin(), out.entries.end(), [](const McDeviation& e) { return e.within; });
  return out;
}

} // namespace varbounds
