#pragma once

#include "varbounds/calculus.hpp"
#include "varbounds/distribution.hpp"
#include "varbounds/expectation.hpp"
#include "varbounds/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace varbounds {

/// Poincare-type bound: (-1)^n (D - S_n) >= 0.  Bessel-type bound: L_n <= D.
enum class Theorem { poincare, bessel };
std::string to_string(Theorem t);
Theorem theorem_from_string(const std::string& s);

struct BoundsConfig {
  EngineConfig engine;
  /// PSD tolerance is tol_factor * (1 + spectral radius of D).
  double tol_factor = 1e-6;
  /// |E[q^k]| (or |E[q^[k]]|) at or below this makes the k-th term null.
  double null_threshold = 1e-12;
  /// Each factor (1 - j*delta) must exceed this in magnitude.
  double singular_guard = 1e-10;
  /// Run check_class before assembling; failures throw ClassMembershipError.
  bool check_membership = true;
};

/// (-1)^(k-1) / (k! prod_{j=0}^{k-1} (1 - j*delta)). Throws SingularCoefficient.
double poincare_coefficient(double delta, int k, double guard = 1e-10);

/// Throws SingularCoefficient when any factor (1 - j*delta) used by the
/// requested theorems up to order n vanishes; needs no integration.
void check_coefficients(double delta, int n, const std::vector<Theorem>& theorems, double guard = 1e-10);

/// E[q^k(X)] for continuous members, E[q^[k](X)] for discrete ones.
ExpectationResult q_weight_moment(const Distribution& d, int k, const EngineConfig& cfg = {});

struct BesselCoefficient {
  bool null_term = false;
  double weight = 0.0;     // 0 for a null term
  double q_moment = 0.0;   // E[q^k] or E[q^[k]]
};

/// 1 / (k! E[q^k] prod_{j=k-1}^{2k-2} (1 - j*delta)), or a null term when the
/// q-moment vanishes. Throws SingularCoefficient.
BesselCoefficient bessel_coefficient(const Distribution& d, int k, const EngineConfig& cfg = {},
                                     double guard = 1e-10, double null_threshold = 1e-12);

/// Covariance matrix of (g_1(X), ..., g_p(X)).
SymMatrix dispersion_matrix(const Distribution& d, const FunctionTuple& g, const EngineConfig& cfg = {});
/// h_ij = E[q^k g_i^(k) g_j^(k)] (continuous) or E[q^[k] D^k g_i D^k g_j] (discrete).
SymMatrix matrix_H(const Distribution& d, const FunctionTuple& g, int k, const EngineConfig& cfg = {});
/// b_ij = E[q^k g_i^(k)] E[q^k g_j^(k)], with the discrete analogue.
SymMatrix matrix_B(const Distribution& d, const FunctionTuple& g, int k, const EngineConfig& cfg = {});
SymMatrix matrix_S(const Distribution& d, const FunctionTuple& g, int n, const BoundsConfig& cfg = {});
SymMatrix matrix_L(const Distribution& d, const FunctionTuple& g, int n, const BoundsConfig& cfg = {});
/// (-1)^n (D - S_n)
SymMatrix matrix_A(const Distribution& d, const FunctionTuple& g, int n, const BoundsConfig& cfg = {});

struct CoefficientRecord {
  int k = 0;
  double q_moment = 0.0;
  std::optional<double> poincare;   // absent when not requested or null
  std::optional<double> bessel;
  bool null_term = false;
};

struct TheoremVerdict {
  Theorem theorem = Theorem::poincare;
  bool pass = false;
  double min_eigenvalue = 0.0;
  double tolerance = 0.0;
  std::vector<double> spectrum;  // of A_n, or of D - L_n
};

struct Provenance {
  std::string distribution;
  std::vector<std::string> functions;
  EngineConfig engine;
  double tol_factor = 1e-6;
  std::string method;              // quadrature | summation
  double max_error_bracket = 0.0;  // largest entry bracket over every assembled matrix
  bool moments_finite = false;     // E|X|^{2n} < infinity
};

struct BoundReport {
  int n = 0;
  std::size_t p = 0;
  SymMatrix D;
  std::vector<SymMatrix> H;   // H_1..H_n
  std::vector<SymMatrix> B;   // B_1..B_n
  std::optional<SymMatrix> S;
  std::optional<SymMatrix> L;
  std::optional<SymMatrix> A;
  std::vector<CoefficientRecord> coefficients;
  std::vector<TheoremVerdict> verdicts;
  Provenance provenance;

  const TheoremVerdict* verdict(Theorem t) const;
  bool all_pass() const;
};

/// Assembles D, H_k, B_k and the requested bounds of order n and judges them.
/// Throws SingularCoefficient, ClassMembershipError or InvalidArgument.
BoundReport compute_bounds(const Distribution& d, const FunctionTuple& g, int n,
                           const std::vector<Theorem>& theorems = {Theorem::poincare, Theorem::bessel},
                           const BoundsConfig& cfg = {});

/// Verdicts recomputed from the matrices stored in a report.
std::vector<TheoremVerdict> evaluate_verdicts(const BoundReport& report, double tol_factor);

// ---------------------------------------------------------------------------
// Function classes

enum class FunctionClass { H, B };
std::string to_string(FunctionClass c);

struct ClassEntry {
  std::size_t function = 0;
  int k = 0;
  std::string condition;  // e.g. "H2", "B1", "B3", "HD1", "BD1", "BD2"
  bool finite = false;
  double value = 0.0;     // truncated expectation
  std::string reason;
};

struct ClassReport {
  FunctionClass cls = FunctionClass::H;
  int n = 0;
  bool pass = false;
  std::vector<ClassEntry> entries;
  bool moments_finite = false;
  /// For class H with finite moments: whether the same tuple also passes class B.
  std::optional<bool> inclusion_consistent;
  std::vector<std::size_t> failing_functions() const;
};

/// Integrability conditions of H^n / B^n (or their lattice analogues) for
/// every g_i and k = 0..n, each judged by probe_finiteness. The lattice B
/// conditions use the rising product q^[k].
ClassReport check_class(const Distribution& d, const FunctionTuple& g, int n, FunctionClass cls);

} // namespace varbounds

namespace varbounds {

/// One Monte Carlo re-estimate of a quantity behind a report: an entry of D
/// or H_k, or a component of the vector u with B_k = u u^t.
struct McDeviation {
  std::string quantity;  // "D", "H", "u"
  int k = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  double exact = 0.0;
  double estimate = 0.0;
  double half_width = 0.0;  // 99% CI
  bool within = false;      // |estimate - exact| <= slack * half_width (+ round-off floor)
};

struct McCheck {
  std::vector<McDeviation> entries;
  double slack = 4.0;
  double max_deviation = 0.0;
  /// max |estimate - exact| / (slack * half_width) over entries with a nonzero width
  double max_ratio = 0.0;
  bool pass = false;
};

/// Draws cfg.mc_samples points once (seed cfg.mc_seed) and re-estimates every
/// quantity of the report from them. Throws NoSampler.
McCheck mc_cross_check(const Distribution& d, const FunctionTuple& g, const BoundReport& report,
                       const EngineConfig& cfg, double slack = 4.0);

} // namespace varbounds
