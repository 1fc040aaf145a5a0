#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mspe/msp.hpp"
#include "mspe/solvers.hpp"

namespace mspe {

enum class ThresholdMethod { scc, size, ppda, strict, cone };

/// "scc_general", "size_based", "ppda", "strict_ppda", "cone_vector".
std::string_view to_string(ThresholdMethod method);
/// Accepts the names above and the short forms scc, size, ppda, strict, cone.
std::optional<ThresholdMethod> parse_threshold_method(std::string_view name);

/// Certified knowledge about mu at some point of the iteration.
struct Bounds {
  /// mu_lower <= mu (an exact-mode Newton iterate).
  NumVec<Rational> mu_lower;
  /// f(u) <= u was checked exactly, hence mu <= u.
  std::optional<NumVec<Rational>> mu_upper;
  Rational cmin;
  std::size_t m_bits = 0;

  Rational mu_lower_min() const;
  std::optional<Rational> mu_upper_max() const;
};

/// Smallest coefficient and the largest bit length of any coefficient
/// numerator or denominator.
std::pair<Rational, std::size_t> cmin_mbits(const Msp& f);

Bounds make_bounds(const Msp& f, NumVec<Rational> mu_lower, std::optional<NumVec<Rational>> mu_upper = {});

/// k = exponent + log2(base), kept in that split form so that 2^k can be
/// handled exactly. `value` is a rational upper bound on k.
struct Threshold {
  ThresholdMethod method = ThresholdMethod::scc;
  Integer exponent;
  Rational base;
  Rational value;
};

/// n * log2(mu_max / (cmin * mu_min * min(mu_min, 1))) from the bounds.
/// Throws PreconditionViolated, MissingUpperBound, ZeroLowerBound.
Threshold threshold_scc(const Msp& f, const Bounds& b);

/// 3 n^2 m + 2 n^2 |log2 mu_min|. |log2 mu_min| is bounded by
/// log2 max(1/mu_lower_min, mu_upper_max); termination systems may omit the
/// upper bound since mu <= 1 there.
Threshold threshold_size(const Msp& f, const Bounds& b);

/// n * 2^(n+2) * m for strongly connected termination systems.
/// Throws NotTerminationSystem.
Threshold threshold_ppda(const Msp& f);

/// 3 n m for termination systems of strict pPDAs. Throws NotStrictSystem.
Threshold threshold_strict(const Msp& f);

/// f(u) <= u, exactly.
bool check_upper(const Msp& f, const NumVec<Rational>& u);

/// Looks for a post-fixed point u = x + eps * d with d = (Id - f'(x))^-1 1,
/// trying eps = 2^-k upwards from about twice the residual of x. Returns the
/// first verified candidate.
std::optional<NumVec<Rational>> find_upper_bound(const Msp& f, const NumVec<Rational>& x);

struct ConeVector {
  NumVec<Rational> d;
  /// d >= f'(u) d for the installed upper bound u.
  bool verified = false;
};

/// d = (Id - f'(x))^-1 1. Throws SingularMatrix, MissingUpperBound.
ConeVector cone_vector(const Msp& f, const NumVec<Rational>& x, const Bounds& b);

/// log2(lambda_max / lambda_min) with lambda_max = max_j u_j / d_j and
/// lambda_min = min_j lower_j / d_j. Throws PreconditionViolated if d is
/// unverified.
Threshold threshold_cone(const Msp& f, const ConeVector& d, const Bounds& b);

struct Certificate {
  std::string system_sha256;
  ArithmeticMode mode = ArithmeticMode::exact;
  std::vector<std::string> variables;
  NumVec<Rational> iterate;
  std::size_t bits = 0;
  Threshold threshold;
  Bounds bounds;
  std::size_t iterations = 0;
  /// [lower, upper] per variable.
  std::vector<std::pair<Rational, Rational>> enclosure;
  /// Other thresholds that applied, for reporting.
  std::vector<Threshold> alternatives;
};

enum class UpperBoundMode { none, one, automatic, given };

struct CertifyOptions {
  /// Empty means: try every applicable method and keep the best certificate.
  std::optional<ThresholdMethod> method;
  UpperBoundMode upper = UpperBoundMode::automatic;
  /// Used with UpperBoundMode::given; verified before use.
  NumVec<Rational> given_upper;
};

/// Installs an upper bound according to the options (verified, never assumed).
std::optional<NumVec<Rational>> select_upper_bound(const Msp& f, const NumVec<Rational>& x,
                                                   const CertifyOptions& options);

/// Valid bits that the threshold guarantees for the last iterate of the trace,
/// accounting for the recorded rounding losses. Never more than
/// steps - ceil(value).
std::size_t certified_bits(const Threshold& k, const IterationTrace<Rational>& trace, const Bounds& b);

/// Certificate for the last iterate of an exact Newton trace on a strongly
/// connected quadratic system. Throws PreconditionViolated, the threshold
/// errors, or NotCertifiable when no bit can be guaranteed.
Certificate certify(const Msp& f, const IterationTrace<Rational>& trace, const CertifyOptions& options = {});

/// Certificates require exact arithmetic; always throws PreconditionViolated.
Certificate certify(const Msp& f, const IterationTrace<Float>& trace, const CertifyOptions& options = {});

struct CertifiedRun {
  IterationTrace<Rational> trace;
  Certificate certificate;
};

/// Runs exact Newton for at least `iterations` steps and, when target_bits > 0,
/// keeps going until the certificate reaches target_bits (or max_iterations).
CertifiedRun certify_newton(const Msp& f, std::size_t iterations, std::size_t target_bits,
                            const CertifyOptions& options = {}, const SolverOptions& solver = {},
                            std::size_t max_iterations = 10000);

/// Hex SHA-256 of the canonical text form of f.
std::string system_sha256(const Msp& f);

/// Every enclosure upper end is below 1.
bool proves_below_one(const Certificate& c);

/// JSON document as described in the README (rationals as "num/den").
std::string to_json(const Certificate& c, int indent = 2);

}  // namespace mspe
