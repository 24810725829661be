#include "varbounds/bounds.hpp"
#include "varbounds/error.hpp"

#include <cmath>

namespace varbounds {

std::string to_string(FunctionClass c) { return c == FunctionClass::H ? "H" : "B"; }

std::vector<std::size_t> ClassReport::failing_functions() const {
  std::vector<std::size_t> out;
  for (const auto& e : entries)
    if (!e.finite && (out.empty() || out.back() != e.function)) out.push_back(e.function);
  return out;
}

namespace {

ClassEntry judge(std::size_t i, int k, std::string condition, const FinitenessProbe& probe) {
  ClassEntry e;
  e.function = i;
  e.k = k;
  e.condition = std::move(condition);
  e.finite = probe.finite;
  e.value = probe.truncated_value;
  e.reason = probe.reason;
  return e;
}

void continuous_entries(const ContinuousIP& d, const FunctionTuple& g, int n, FunctionClass cls,
                        std::vector<ClassEntry>& out) {
  const Quadratic& q = d.quadratic();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g[i].is_smooth() || g[i].smooth().max_order() < n) {
      ClassEntry e;
      e.function = i;
      e.k = n;
      e.condition = cls == FunctionClass::H ? "H1" : "B2";
      e.reason = "derivatives up to order n are not available";
      out.push_back(e);
      continue;
    }
    const SmoothFunction& f = g[i].smooth();
    if (cls == FunctionClass::B) {
      out.push_back(judge(i, 0, "B1", probe_finiteness(d, [&](double x) {
                            const double v = f(x);
                            return v * v;
                          })));
    }
    for (int k = 0; k <= n; ++k) {
      if (cls == FunctionClass::H) {
        out.push_back(judge(i, k, "H2", probe_finiteness(d, [&, k](double x) {
                              const double v = f.derivative(k, x);
                              return std::pow(q(x), k) * v * v;
                            })));
      } else {
        out.push_back(judge(i, k, "B3", probe_finiteness(d, [&, k](double x) {
                              return std::pow(q(x), k) * std::abs(f.derivative(k, x));
                            })));
      }
    }
  }
}

void discrete_entries(const DiscreteCO& d, const FunctionTuple& g, int n, FunctionClass cls,
                      std::vector<ClassEntry>& out) {
  const Quadratic& q = d.quadratic();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const LatticeFunction& f = g[i].lattice();
    if (cls == FunctionClass::B) {
      out.push_back(judge(i, 0, "BD1", probe_finiteness(d, [&](std::int64_t j) {
                            const double v = f(j);
                            return v * v;
                          })));
    }
    for (int k = 0; k <= n; ++k) {
      // Zero weights skip the differences, which may reach past the support.
      auto weight = [&, k](std::int64_t j) { return rising_q(q, k, static_cast<double>(j)); };
      if (cls == FunctionClass::H) {
        out.push_back(judge(i, k, "HD1", probe_finiteness(d, [&, k](std::int64_t j) {
                              const double w = weight(j);
                              if (w == 0.0) return 0.0;
                              const double v = forward_difference(f, k, j);
                              return std::abs(w) * v * v;
                            })));
      } else {
        out.push_back(judge(i, k, "BD2", probe_finiteness(d, [&, k](std::int64_t j) {
                              const double w = weight(j);
                              if (w == 0.0) return 0.0;
                              return std::abs(w * forward_difference(f, k, j));
                            })));
      }
    }
  }
}

} // namespace

ClassReport check_class(const Distribution& d, const FunctionTuple& g, int n, FunctionClass cls) {
  if (n < 1) throw InvalidArgument("class order n must be >= 1");
  ClassReport rep;
  rep.cls = cls;
  rep.n = n;
  if (const auto* c = std::get_if<ContinuousIP>(&d)) continuous_entries(*c, g, n, cls, rep.entries);
  else discrete_entries(std::get<DiscreteCO>(d), g, n, cls, rep.entries);
  rep.pass = true;
  for (const auto& e : rep.entries) rep.pass = rep.pass && e.finite;
  rep.moments_finite = moment_finiteness(d, n).finite;
  if (cls == FunctionClass::H && rep.pass && rep.moments_finite) {
    rep.inclusion_consistent = check_class(d, g, n, FunctionClass::B).pass;
  }
  return rep;
}

} // namespace varbounds
