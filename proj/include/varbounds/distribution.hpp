#pragma once

#include "varbounds/quadratic.hpp"
#include "varbounds/rng.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace varbounds {

/// Continuous member of the Integrated Pearson family IP(mu; delta, beta, gamma):
/// int_{-inf}^x (mu - t) f(t) dt = q(x) f(x) for every x.
class ContinuousIP {
public:
  using Density = std::function<double(double)>;
  using Sampler = std::function<double(SplitMix64&)>;
  /// f at distance gap from the lower (end = -1) or upper (end = +1) end.
  using EndDensity = std::function<double(int end, double gap)>;

  struct Options {
    /// Typical spread, used to place quadrature nodes on unbounded supports.
    /// Defaults to half the support width when finite, else 1.
    std::optional<double> scale;
    Sampler sampler;
    /// Kinks of a tabulated density; quadrature then works segment by segment.
    std::vector<double> breakpoints;
    /// Optional; keeps the density exact within a rounding unit of a finite
    /// end, where x itself is no longer representable apart from the end.
    EndDensity end_density;
  };

  /// support (alpha, omega) may use +-infinity. The quadratic may be absent
  /// for members whose q is to be inferred.
  ContinuousIP(std::string name, double mean, std::optional<Quadratic> q, double alpha, double omega,
               Density density, Options options = {});

  const std::string& name() const noexcept { return name_; }
  double mean() const noexcept { return mean_; }
  bool has_quadratic() const noexcept { return q_.has_value(); }
  /// Throws InvalidArgument when no quadratic is attached.
  const Quadratic& quadratic() const;
  double alpha() const noexcept { return alpha_; }
  double omega() const noexcept { return omega_; }
  bool bounded() const noexcept;
  double scale() const noexcept { return scale_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

  /// f(x); zero outside (alpha, omega).
  double density(double x) const;
  /// f at the point x = alpha + gap (end = -1) or omega - gap (end = +1);
  /// end = 0 falls back to density(x).
  double density_near(double x, int end, double gap) const;

  bool has_sampler() const noexcept { return static_cast<bool>(sampler_); }
  double sample(SplitMix64& rng) const;

  ContinuousIP with_quadratic(std::optional<Quadratic> q) const;

private:
  std::string name_;
  double mean_;
  std::optional<Quadratic> q_;
  double alpha_;
  double omega_;
  Density density_;
  EndDensity end_density_;
  Sampler sampler_;
  double scale_;
  std::vector<double> breakpoints_;
};

/// Integer-valued member of the Cumulative Ord family CO(mu; delta, beta, gamma):
/// sum_{k<=j} (mu - k) p(k) = q(j) p(j) for every integer j.
class DiscreteCO {
public:
  using Pmf = std::function<double(std::int64_t)>;
  using Sampler = std::function<std::int64_t(SplitMix64&)>;

  static constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
  static constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();

  /// Support {alpha, ..., omega}; kNegInf / kPosInf mark unbounded ends.
  DiscreteCO(std::string name, double mean, std::optional<Quadratic> q, std::int64_t alpha,
             std::int64_t omega, Pmf pmf, Sampler sampler = {});

  const std::string& name() const noexcept { return name_; }
  double mean() const noexcept { return mean_; }
  bool has_quadratic() const noexcept { return q_.has_value(); }
  const Quadratic& quadratic() const;
  std::int64_t alpha() const noexcept { return alpha_; }
  std::int64_t omega() const noexcept { return omega_; }
  bool bounded() const noexcept { return alpha_ != kNegInf && omega_ != kPosInf; }

  /// p(j); zero outside the support.
  double pmf(std::int64_t j) const;

  bool has_sampler() const noexcept { return static_cast<bool>(sampler_); }
  std::int64_t sample(SplitMix64& rng) const;

  DiscreteCO with_quadratic(std::optional<Quadratic> q) const;
  DiscreteCO with_sampler(Sampler sampler) const;

private:
  std::string name_;
  double mean_;
  std::optional<Quadratic> q_;
  std::int64_t alpha_;
  std::int64_t omega_;
  Pmf pmf_;
  Sampler sampler_;
};

using Distribution = std::variant<ContinuousIP, DiscreteCO>;

const std::string& name_of(const Distribution& d);
double mean_of(const Distribution& d);
const Quadratic& quadratic_of(const Distribution& d);
bool has_quadratic(const Distribution& d);
bool is_discrete(const Distribution& d) noexcept;
bool has_sampler(const Distribution& d);
Distribution with_quadratic(const Distribution& d, std::optional<Quadratic> q);

using ParamMap = std::map<std::string, double>;

/// Standard members with their shipped quadratics:
///   normal {mean=0, var=1}               q = var
///   gamma {shape, scale=1}               q = scale * x
///   beta {a, b}                          q = x(1-x)/(a+b)
///   poisson {lambda}                     q = lambda
///   binomial {n, p}                      q = p (n - x)
///   negative-binomial {r, p}             q = (1-p)/p (x + r)   (failures before the r-th success)
///   hypergeometric {population, successes, draws}
///                                        q = (successes - x)(draws - x)/population
/// Throws InvalidArgument for unknown names, unknown keys or invalid values.
Distribution catalog(const std::string& name, const ParamMap& params = {});

std::vector<std::string> catalog_names();

/// Builds an inversion sampler over {lo, ..., hi} from a pmf.
DiscreteCO::Sampler inversion_sampler(const DiscreteCO::Pmf& pmf, std::int64_t lo, std::int64_t hi);

// ---------------------------------------------------------------------------
// Defining-identity checks

struct InferenceConfig {
  int grid_points = 24;               // continuous grid size, >= 8
  std::size_t max_lattice_points = 400;
  double density_floor = 1e-12;       // relative to the largest density on the grid
  int quad_nodes = 200;
  double trunc_tol = 1e-12;
};

struct QuadraticFit {
  Quadratic q;
  double max_residual = 0.0;   // max |C(x)/f(x) - q(x)| over the grid
  double mean_residual = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of (delta, beta, gamma) to C(x)/f(x), where
/// C(x) = int_{-inf}^x (mu - t) f(t) dt (or the prefix sum in the discrete
/// case), on a grid inside the support. Any attached quadratic is ignored.
/// Throws InvalidArgument when fewer than 3 usable points remain or the
/// design is rank deficient.
QuadraticFit infer_quadratic(const Distribution& d, const InferenceConfig& cfg = {});

struct MembershipReport {
  bool pass = false;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  std::size_t points = 0;
};

inline constexpr double kContinuousMembershipTol = 1e-8;
inline constexpr double kDiscreteMembershipTol = 1e-10;
/// Interpolated density tables cannot meet the analytic tolerance.
inline constexpr double kTabulatedMembershipTol = 1e-6;

/// 1e-8 for continuous members, 1e-6 for tabulated densities, 1e-10 for
/// discrete members.
double default_membership_tolerance(const Distribution& d);

/// Residual of the defining identity for the attached quadratic, judged
/// against default_membership_tolerance unless a tolerance is given.
MembershipReport verify_membership(const Distribution& d, std::optional<double> tolerance = {},
                                   const InferenceConfig& cfg = {});

/// C(x) evaluated on the same grid infer_quadratic uses; exposed for tests.
struct IdentitySamples {
  std::vector<double> x;
  std::vector<double> cumulative;  // C(x)
  std::vector<double> density;     // f(x) or p(x)
};
IdentitySamples identity_samples(const Distribution& d, const InferenceConfig& cfg = {});

struct MomentReport {
  bool finite = false;
  bool analytic = false;   // delta <= 0, bounded support, or 2n < 1 + 1/delta
  bool numeric = false;    // truncated E|X|^{2n} stabilizes
};

/// Whether E|X|^{2n} < infinity; finite only when the analytic rule and the
/// numeric tail probe agree.
MomentReport moment_finiteness(const Distribution& d, int n);

} // namespace varbounds
