#include "mspe/certification.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <json.hpp>

#include "mspe/parser.hpp"

namespace mspe {

std::string_view to_string(ThresholdMethod method) {
  switch (method) {
    case ThresholdMethod::scc:
      return "scc_general";
    case ThresholdMethod::size:
      return "size_based";
    case ThresholdMethod::ppda:
      return "ppda";
    case ThresholdMethod::strict:
      return "strict_ppda";
    case ThresholdMethod::cone:
      return "cone_vector";
  }
  return "scc_general";
}

std::optional<ThresholdMethod> parse_threshold_method(std::string_view name) {
  if (name == "scc" || name == "scc_general") return ThresholdMethod::scc;
  if (name == "size" || name == "size_based") return ThresholdMethod::size;
  if (name == "ppda") return ThresholdMethod::ppda;
  if (name == "strict" || name == "strict_ppda") return ThresholdMethod::strict;
  if (name == "cone" || name == "cone_vector") return ThresholdMethod::cone;
  return std::nullopt;
}

Rational Bounds::mu_lower_min() const {
  if (mu_lower.empty()) throw PreconditionViolated("empty lower bound");
  return *std::min_element(mu_lower.begin(), mu_lower.end());
}

std::optional<Rational> Bounds::mu_upper_max() const {
  if (!mu_upper) return std::nullopt;
  return *std::max_element(mu_upper->begin(), mu_upper->end());
}

std::pair<Rational, std::size_t> cmin_mbits(const Msp& f) {
  std::optional<Rational> cmin;
  std::size_t m = 0;
  for (const auto& p : f.equations()) {
    for (const auto& mono : p.monomials()) {
      const Rational& c = mono.coefficient();
      if (!cmin || c < *cmin) cmin = c;
      m = std::max({m, bit_length(c.get_num()), bit_length(c.get_den())});
    }
  }
  if (!cmin) throw PreconditionViolated("system has no coefficients");
  return {*cmin, m};
}

Bounds make_bounds(const Msp& f, NumVec<Rational> mu_lower, std::optional<NumVec<Rational>> mu_upper) {
  if (mu_lower.size() != f.size()) throw DimensionMismatch(f.size(), mu_lower.size());
  if (mu_upper && mu_upper->size() != f.size()) throw DimensionMismatch(f.size(), mu_upper->size());
  auto [cmin, m] = cmin_mbits(f);
  return Bounds{std::move(mu_lower), std::move(mu_upper), cmin, m};
}

namespace {

void require_scc_quadratic(const Msp& f) {
  if (!f.is_strongly_connected()) throw PreconditionViolated("thresholds need a strongly connected system");
  if (!f.is_quadratic()) throw PreconditionViolated("thresholds need a quadratic system");
}

Rational positive_lower_min(const Bounds& b) {
  Rational lo = b.mu_lower_min();
  if (lo <= 0) throw ZeroLowerBound();
  return lo;
}

Threshold make_threshold(ThresholdMethod method, Integer exponent, Rational base) {
  Rational value = Rational(exponent) + log2_upper(base);
  return Threshold{method, std::move(exponent), std::move(base), std::move(value)};
}

}  // namespace

Threshold threshold_scc(const Msp& f, const Bounds& b) {
  require_scc_quadratic(f);
  if (!b.mu_upper) throw MissingUpperBound();
  const Rational lo = positive_lower_min(b);
  const Rational hi = *b.mu_upper_max();
  const Rational ratio = hi / (b.cmin * lo * std::min(lo, Rational(1)));
  return make_threshold(ThresholdMethod::scc, 0, pow(ratio, f.size()));
}

Threshold threshold_size(const Msp& f, const Bounds& b) {
  require_scc_quadratic(f);
  const Rational lo = positive_lower_min(b);
  Rational spread = 1 / lo;
  if (b.mu_upper) {
    spread = std::max(spread, *b.mu_upper_max());
  } else if (!f.is_termination()) {
    throw MissingUpperBound();
  }
  spread = std::max(spread, Rational(1));
  const unsigned long n2 = f.size() * f.size();
  return make_threshold(ThresholdMethod::size, Integer(3 * n2 * b.m_bits), pow(spread, 2 * n2));
}

Threshold threshold_ppda(const Msp& f) {
  if (!f.is_termination() || !f.is_strongly_connected()) throw NotTerminationSystem();
  require_scc_quadratic(f);
  const std::size_t n = f.size();
  const std::size_t m = cmin_mbits(f).second;
  Integer exponent = Integer(n) * Integer(m);
  mpz_mul_2exp(exponent.get_mpz_t(), exponent.get_mpz_t(), n + 2);
  return make_threshold(ThresholdMethod::ppda, exponent, 1);
}

Threshold threshold_strict(const Msp& f) {
  if (!f.is_strict()) throw NotStrictSystem();
  if (!f.is_strongly_connected()) throw NotTerminationSystem();
  require_scc_quadratic(f);
  const std::size_t m = cmin_mbits(f).second;
  return make_threshold(ThresholdMethod::strict, Integer(3 * f.size() * m), 1);
}

bool check_upper(const Msp& f, const NumVec<Rational>& u) {
  if (u.size() != f.size()) throw DimensionMismatch(f.size(), u.size());
  for (const auto& v : u) {
    if (v < 0) return false;
  }
  return leq(eval(f, u), u);
}

std::optional<NumVec<Rational>> find_upper_bound(const Msp& f, const NumVec<Rational>& x) {
  const std::size_t n = f.size();
  NumVec<Rational> d;
  try {
    d = solve_linear(identity_minus(jacobian(f, x)), NumVec<Rational>(n, Rational(1)));
  } catch (const SingularMatrix&) {
    return std::nullopt;
  }
  for (const auto& v : d) {
    if (v <= 0) return std::nullopt;
  }
  // Keep the direction short: 64 significant bits are plenty for a bound.
  for (auto& v : d) v = ceil_to_grid(v, 64);

  const Rational r = residual_norm(f, x);
  Rational eps = pow2_ceil_at_least_one(r * pow2(200)) * pow2(-199);
  for (int attempt = 0; attempt < 260; ++attempt, eps *= 2) {
    NumVec<Rational> u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = ceil_to_grid(x[i] + eps * d[i], 256);
    if (check_upper(f, u)) return u;
  }
  return std::nullopt;
}

ConeVector cone_vector(const Msp& f, const NumVec<Rational>& x, const Bounds& b) {
  const std::size_t n = f.size();
  ConeVector out;
  out.d = solve_linear(identity_minus(jacobian(f, x)), NumVec<Rational>(n, Rational(1)));
  if (!b.mu_upper) throw MissingUpperBound();
  for (const auto& v : out.d) {
    if (v <= 0) return out;
  }
  const NumVec<Rational> image = jacobian(f, *b.mu_upper) * out.d;
  out.verified = leq(image, out.d);
  return out;
}

Threshold threshold_cone(const Msp& f, const ConeVector& d, const Bounds& b) {
  if (!d.verified) throw PreconditionViolated("cone vector is not verified");
  if (!b.mu_upper) throw MissingUpperBound();
  if (d.d.size() != f.size()) throw DimensionMismatch(f.size(), d.d.size());
  positive_lower_min(b);
  std::optional<Rational> lambda_max;
  std::optional<Rational> lambda_min;
  for (std::size_t j = 0; j < f.size(); ++j) {
    Rational up = (*b.mu_upper)[j] / d.d[j];
    Rational low = b.mu_lower[j] / d.d[j];
    if (!lambda_max || up > *lambda_max) lambda_max = up;
    if (!lambda_min || low < *lambda_min) lambda_min = low;
  }
  return make_threshold(ThresholdMethod::cone, 0, *lambda_max / *lambda_min);
}

std::optional<NumVec<Rational>> select_upper_bound(const Msp& f, const NumVec<Rational>& x,
                                                   const CertifyOptions& options) {
  const std::size_t n = f.size();
  const NumVec<Rational> ones(n, Rational(1));
  switch (options.upper) {
    case UpperBoundMode::none:
      return std::nullopt;
    case UpperBoundMode::one:
      if (check_upper(f, ones)) return ones;
      return std::nullopt;
    case UpperBoundMode::given:
      if (check_upper(f, options.given_upper)) return options.given_upper;
      return std::nullopt;
    case UpperBoundMode::automatic:
      break;
  }
  // The componentwise minimum of two post-fixed points is again one.
  std::optional<NumVec<Rational>> best;
  if (check_upper(f, ones)) best = ones;
  if (auto tight = find_upper_bound(f, x)) {
    if (!best) {
      best = std::move(tight);
    } else {
      for (std::size_t i = 0; i < n; ++i) (*best)[i] = std::min((*best)[i], (*tight)[i]);
    }
  }
  return best;
}

std::size_t certified_bits(const Threshold& k, const IterationTrace<Rational>& trace, const Bounds& b) {
  const std::size_t steps = trace.steps();
  const Integer ceil_k = ceil(k.value);
  if (Integer(steps) <= ceil_k) return 0;
  const Integer cap = Integer(steps) - ceil_k;

  const long K = static_cast<long>(steps);
  Rational lost = pow2(-K);
  const Rational lo = b.mu_lower_min();
  for (std::size_t i = 0; i < trace.rounding_errors.size() && i < steps; ++i) {
    const Rational& e = trace.rounding_errors[i];
    if (e == 0) continue;
    if (lo <= 0) return 0;
    lost += pow2(static_cast<long>(i) + 2 - K) * e / lo;
  }
  Integer bits = Integer(floor_neg_log2(k.base * lost)) - k.exponent;
  bits = std::min(bits, cap);
  if (bits <= 0) return 0;
  return bits.get_ui();
}

namespace {

std::vector<std::pair<Rational, Rational>> enclosure_for(const NumVec<Rational>& x, std::size_t bits,
                                                         const std::optional<NumVec<Rational>>& upper) {
  const Rational rel = pow2(-static_cast<long>(bits));
  std::vector<std::pair<Rational, Rational>> out;
  for (std::size_t j = 0; j < x.size(); ++j) {
    Rational hi;
    if (upper) {
      hi = std::min(Rational(x[j] + rel * (*upper)[j]), (*upper)[j]);
    } else {
      hi = x[j] / (1 - rel);
    }
    out.emplace_back(x[j], std::move(hi));
  }
  return out;
}

std::vector<Threshold> candidate_thresholds(const Msp& f, const Bounds& b, const NumVec<Rational>& x,
                                            const std::optional<ThresholdMethod>& only) {
  std::vector<Threshold> out;
  auto want = [&](ThresholdMethod m) { return !only || *only == m; };
  auto attempt = [&](ThresholdMethod m, auto&& compute) {
    if (!want(m)) return;
    if (only) {
      out.push_back(compute());
      return;
    }
    try {
      out.push_back(compute());
    } catch (const CertificationError&) {
    } catch (const PreconditionViolated&) {
    } catch (const SolverError&) {
    }
  };
  attempt(ThresholdMethod::scc, [&] { return threshold_scc(f, b); });
  attempt(ThresholdMethod::size, [&] { return threshold_size(f, b); });
  attempt(ThresholdMethod::ppda, [&] { return threshold_ppda(f); });
  attempt(ThresholdMethod::strict, [&] { return threshold_strict(f); });
  if (want(ThresholdMethod::cone)) {
    try {
      ConeVector d = cone_vector(f, x, b);
      if (d.verified) {
        out.push_back(threshold_cone(f, d, b));
      } else if (only) {
        // An unverified cone vector gives no guarantee; fall back to the general threshold.
        out.push_back(threshold_scc(f, b));
      }
    } catch (const CertificationError&) {
      if (only) throw;
    } catch (const SolverError&) {
      if (only) throw;
    }
  }
  return out;
}

}  // namespace

Certificate certify(const Msp& f, const IterationTrace<Rational>& trace, const CertifyOptions& options) {
  if (trace.scheme != SchemeKind::newton) throw PreconditionViolated("certificates need a Newton trace");
  if (!f.is_strongly_connected()) {
    throw PreconditionViolated("certificates are only issued for strongly connected systems; use solve --scheme dnm");
  }
  if (!f.is_quadratic()) throw PreconditionViolated("certificates need a quadratic system; quadratize it first");
  const NumVec<Rational>& x = trace.final_iterate;
  if (x.size() != f.size()) throw DimensionMismatch(f.size(), x.size());

  Bounds b = make_bounds(f, x, select_upper_bound(f, x, options));
  if (options.upper == UpperBoundMode::given && !b.mu_upper) {
    throw CertificationError("the given upper bound u does not satisfy f(u) <= u");
  }
  std::vector<Threshold> thresholds = candidate_thresholds(f, b, x, options.method);
  if (thresholds.empty()) {
    // Surface the reason the general threshold failed.
    positive_lower_min(b);
    if (!b.mu_upper) throw MissingUpperBound();
    throw NotCertifiable("no threshold applies to this system");
  }

  std::size_t best = 0;
  std::size_t best_bits = 0;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    std::size_t bits = certified_bits(thresholds[i], trace, b);
    if (i == 0 || bits > best_bits) {
      best = i;
      best_bits = bits;
    }
  }
  if (best_bits == 0) {
    throw NotCertifiable("no valid bits can be certified after " + std::to_string(trace.steps()) +
                         " iterations (threshold " + std::string(to_string(thresholds[best].method)) + " = " +
                         to_decimal_string(thresholds[best].value, 6) + ")");
  }

  Certificate c;
  c.system_sha256 = system_sha256(f);
  c.variables = f.variables();
  c.iterate = x;
  c.bits = best_bits;
  c.threshold = thresholds[best];
  c.iterations = trace.steps();
  c.enclosure = enclosure_for(x, best_bits, b.mu_upper);
  c.bounds = std::move(b);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (i != best) c.alternatives.push_back(thresholds[i]);
  }
  return c;
}

Certificate certify(const Msp&, const IterationTrace<Float>&, const CertifyOptions&) {
  throw PreconditionViolated("certificates require exact arithmetic (--mode exact)");
}

CertifiedRun certify_newton(const Msp& f, std::size_t iterations, std::size_t target_bits,
                            const CertifyOptions& options, const SolverOptions& solver,
                            std::size_t max_iterations) {
  StopRule stop = StopRule::max_iterations(iterations);
  if (target_bits > 0) {
    stop = StopRule::until(
        [&](const IterationTrace<Rational>& t) {
          if (t.steps() < iterations) return false;
          try {
            return certify(f, t, options).bits >= target_bits;
          } catch (const NotCertifiable&) {
            return false;
          } catch (const ZeroLowerBound&) {
            return false;
          }
        },
        std::max(iterations, max_iterations));
  }
  IterationTrace<Rational> trace = newton_solve<Rational>(f, stop, solver);
  Certificate c = certify(f, trace, options);
  return {std::move(trace), std::move(c)};
}

std::string system_sha256(const Msp& f) {
  const std::string text = format_mspe(f);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

bool proves_below_one(const Certificate& c) {
  return std::all_of(c.enclosure.begin(), c.enclosure.end(), [](const auto& e) { return e.second < 1; });
}

std::string to_json(const Certificate& c, int indent) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["system_sha256"] = c.system_sha256;
  doc["mode"] = std::string(to_string(c.mode));
  ordered_json iterate = ordered_json::object();
  for (std::size_t j = 0; j < c.variables.size(); ++j) iterate[c.variables[j]] = to_fraction_string(c.iterate[j]);
  doc["iterate"] = iterate;
  doc["bits"] = c.bits;
  ordered_json threshold;
  threshold["method"] = std::string(to_string(c.threshold.method));
  threshold["value"] = to_fraction_string(c.threshold.value);
  threshold["cmin"] = to_fraction_string(c.bounds.cmin);
  threshold["m"] = c.bounds.m_bits;
  threshold["mu_lower_min"] = to_fraction_string(c.bounds.mu_lower_min());
  if (auto hi = c.bounds.mu_upper_max()) {
    threshold["mu_upper_max"] = to_fraction_string(*hi);
  } else {
    threshold["mu_upper_max"] = nullptr;
  }
  doc["threshold"] = threshold;
  doc["iterations"] = c.iterations;
  ordered_json enclosure = ordered_json::object();
  for (std::size_t j = 0; j < c.variables.size(); ++j) {
    enclosure[c.variables[j]] = {to_fraction_string(c.enclosure[j].first), to_fraction_string(c.enclosure[j].second)};
  }
  doc["enclosure"] = enclosure;
  return doc.dump(indent);
}

}  // namespace mspe
