#pragma once

#include "varbounds/distribution.hpp"
#include "varbounds/quadrature.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace varbounds {

struct EngineConfig {
  int quad_nodes = 200;
  InfiniteMap infinite_map = InfiniteMap::rational;
  double trunc_tol = 1e-12;
  std::size_t mc_samples = 200000;
  std::uint64_t mc_seed = 0x5eed5eedULL;

  /// Throws InvalidArgument unless quad_nodes >= 10, trunc_tol in (0, 1e-6]
  /// and mc_samples >= 2.
  void validate() const;
};

enum class Method { quadrature, summation, monte_carlo };
std::string to_string(Method m);
std::string to_string(InfiniteMap m);

struct ExpectationResult {
  double value = 0.0;
  double error_bracket = 0.0;
  Method method = Method::quadrature;
  /// quadrature: node count; summation: truncated pmf mass; monte-carlo: 99% CI half-width
  double detail = 0.0;
};

using RealFunction = std::function<double(double)>;
using IntegerFunction = std::function<double(std::int64_t)>;

/// Gauss-Legendre on the mapped support. The bracket is
/// |Q(quad_nodes) - Q(quad_nodes/2)| with a round-off floor. Throws
/// NonFiniteIntegrand at the first bad node, and Error when the bracket
/// exceeds bracket_ceiling.
ExpectationResult expect_continuous(const ContinuousIP& d, const RealFunction& phi, const EngineConfig& cfg = {},
                                    std::optional<double> bracket_ceiling = {});

/// Exact summation over the truncated support. The bracket is the largest
/// |phi| over the last 10 included points times the truncated mass (zero
/// for finite supports).
ExpectationResult expect_discrete(const DiscreteCO& d, const IntegerFunction& phi, const EngineConfig& cfg = {});

/// Sample mean over cfg.mc_samples draws seeded with cfg.mc_seed; the bracket
/// is the 99% normal-approximation half-width. Throws NoSampler.
ExpectationResult expect_mc(const Distribution& d, const RealFunction& phi, const EngineConfig& cfg = {});

ExpectationResult expect(const Distribution& d, const RealFunction& phi, const EngineConfig& cfg = {});

/// Nodes carrying the probability weights w_m = (quadrature weight) * f(x_m);
/// nodes outside the support or with zero density are dropped. A density
/// unbounded at a finite end makes the map cluster nodes there, and nodes
/// holding less than ~1e-17 of the mass next to such an end are dropped.
MappedNodes probability_nodes(const ContinuousIP& d, int n, InfiniteMap map);

/// Whether node x has rounded onto a finite end of the support. Integrands
/// that are not finite there are skipped rather than reported.
bool on_end(const ContinuousIP& d, double x);

struct LatticeWindow {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  double tail_mass = 0.0;   // estimated pmf mass outside [lo, hi]
};

/// Smallest window around the mean whose outside mass, weighted by
/// (1 + |j|)^8, drops below trunc_tol; the whole support when bounded.
/// Throws Error when more than 10^7 points would be needed.
LatticeWindow truncate_support(const DiscreteCO& d, double trunc_tol);

/// Outcome of probing whether E[phi(X)] is finite for a non-negative phi.
struct FinitenessProbe {
  bool finite = false;
  double truncated_value = 0.0;
  std::string reason;
};

/// Integrates phi*f over dyadic shells approaching every unbounded or
/// singular end of the support and declares the expectation finite when the
/// shell contributions shrink geometrically (successive ratios <= 0.95) or
/// vanish.
FinitenessProbe probe_finiteness(const ContinuousIP& d, const RealFunction& phi);
FinitenessProbe probe_finiteness(const DiscreteCO& d, const IntegerFunction& phi);

} // namespace varbounds
