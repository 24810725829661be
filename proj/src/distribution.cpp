#include "varbounds/distribution.hpp"

#include "varbounds/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace varbounds {

ContinuousIP::ContinuousIP(std::string name, double mean, std::optional<Quadratic> q, double alpha, double omega,
                           Density density, Options options)
    : name_(std::move(name)), mean_(mean), q_(std::move(q)), alpha_(alpha), omega_(omega),
      density_(std::move(density)), end_density_(std::move(options.end_density)), sampler_(std::move(options.sampler)),
      breakpoints_(std::move(options.breakpoints)) {
  if (!(alpha_ < omega_) || std::isnan(alpha_) || std::isnan(omega_))
    throw InvalidArgument("support must be a non-empty open interval");
  if (!std::isfinite(mean_) || !(mean_ > alpha_ && mean_ < omega_))
    throw InvalidArgument("mean must be finite and lie inside the support");
  if (!density_) throw InvalidArgument("density evaluator is required");
  if (options.scale) {
    if (!(*options.scale > 0.0) || !std::isfinite(*options.scale))
      throw InvalidArgument("scale must be positive and finite");
    scale_ = *options.scale;
  } else {
    scale_ = bounded() ? 0.5 * (omega_ - alpha_) : 1.0;
  }
  if (!breakpoints_.empty()) {
    std::sort(breakpoints_.begin(), breakpoints_.end());
    if (breakpoints_.front() < alpha_ || breakpoints_.back() > omega_ || !bounded())
      throw InvalidArgument("breakpoints must lie inside a bounded support");
  }
}

const Quadratic& ContinuousIP::quadratic() const {
  if (!q_) throw InvalidArgument("distribution '" + name_ + "' has no quadratic attached");
  return *q_;
}

bool ContinuousIP::bounded() const noexcept { return std::isfinite(alpha_) && std::isfinite(omega_); }

double ContinuousIP::density(double x) const {
  if (!(x > alpha_ && x < omega_)) return 0.0;
  return density_(x);
}

double ContinuousIP::density_near(double x, int end, double gap) const {
  if (end == 0 || !end_density_) return density(x);
  if (!(gap > 0.0) || (end < 0 ? !std::isfinite(alpha_) : !std::isfinite(omega_))) return 0.0;
  return end_density_(end, gap);
}

double ContinuousIP::sample(SplitMix64& rng) const {
  if (!sampler_) throw NoSampler("distribution '" + name_ + "' has no sampler");
  return sampler_(rng);
}

ContinuousIP ContinuousIP::with_quadratic(std::optional<Quadratic> q) const {
  ContinuousIP copy = *this;
  copy.q_ = std::move(q);
  return copy;
}

DiscreteCO::DiscreteCO(std::string name, double mean, std::optional<Quadratic> q, std::int64_t alpha,
                       std::int64_t omega, Pmf pmf, Sampler sampler)
    : name_(std::move(name)), mean_(mean), q_(std::move(q)), alpha_(alpha), omega_(omega), pmf_(std::move(pmf)),
      sampler_(std::move(sampler)) {
  if (alpha_ > omega_ || alpha_ == kPosInf || omega_ == kNegInf)
    throw InvalidArgument("support must be a non-empty integer interval");
  if (!std::isfinite(mean_)) throw InvalidArgument("mean must be finite");
  if ((alpha_ != kNegInf && mean_ < static_cast<double>(alpha_)) ||
      (omega_ != kPosInf && mean_ > static_cast<double>(omega_)))
    throw InvalidArgument("mean must lie within the support");
  if (!pmf_) throw InvalidArgument("pmf evaluator is required");
}

const Quadratic& DiscreteCO::quadratic() const {
  if (!q_) throw InvalidArgument("distribution '" + name_ + "' has no quadratic attached");
  return *q_;
}

double DiscreteCO::pmf(std::int64_t j) const {
  if (j < alpha_ || j > omega_) return 0.0;
  return pmf_(j);
}

std::int64_t DiscreteCO::sample(SplitMix64& rng) const {
  if (!sampler_) throw NoSampler("distribution '" + name_ + "' has no sampler");
  return sampler_(rng);
}

DiscreteCO DiscreteCO::with_quadratic(std::optional<Quadratic> q) const {
  DiscreteCO copy = *this;
  copy.q_ = std::move(q);
  return copy;
}

DiscreteCO DiscreteCO::with_sampler(Sampler sampler) const {
  DiscreteCO copy = *this;
  copy.sampler_ = std::move(sampler);
  return copy;
}

const std::string& name_of(const Distribution& d) {
  return std::visit([](const auto& x) -> const std::string& { return x.name(); }, d);
}

double mean_of(const Distribution& d) {
  return std::visit([](const auto& x) { return x.mean(); }, d);
}

const Quadratic& quadratic_of(const Distribution& d) {
  return std::visit([](const auto& x) -> const Quadratic& { return x.quadratic(); }, d);
}

bool has_quadratic(const Distribution& d) {
  return std::visit([](const auto& x) { return x.has_quadratic(); }, d);
}

bool is_discrete(const Distribution& d) noexcept { return std::holds_alternative<DiscreteCO>(d); }

bool has_sampler(const Distribution& d) {
  return std::visit([](const auto& x) { return x.has_sampler(); }, d);
}

Distribution with_quadratic(const Distribution& d, std::optional<Quadratic> q) {
  return std::visit([&](const auto& x) -> Distribution { return x.with_quadratic(q); }, d);
}

DiscreteCO::Sampler inversion_sampler(const DiscreteCO::Pmf& pmf, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw InvalidArgument("inversion sampler needs lo <= hi");
  if (hi - lo > 10'000'000) throw InvalidArgument("inversion table too large");
  auto cdf = std::make_shared<std::vector<double>>();
  cdf->reserve(static_cast<std::size_t>(hi - lo + 1));
  double acc = 0.0;
  for (std::int64_t j = lo; j <= hi; ++j) {
    acc += pmf(j);
    cdf->push_back(acc);
  }
  return [cdf, lo](SplitMix64& rng) -> std::int64_t {
    const double u = rng.uniform() * cdf->back();
    const auto it = std::upper_bound(cdf->begin(), cdf->end(), u);
    const auto idx = std::min<std::ptrdiff_t>(it - cdf->begin(), static_cast<std::ptrdiff_t>(cdf->size()) - 1);
    return lo + idx;
  };
}

} // namespace varbounds
