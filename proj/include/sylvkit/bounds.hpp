#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "sylvkit/errors.hpp"
#include "sylvkit/interval.hpp"

namespace sylvkit::bounds {

/// A computed real carried as midpoint and conservative error radius.
/// The true mathematical value is guaranteed to lie within
/// [mid - radius, mid + radius]; radius only ever grows through
/// propagation, never shrinks.
struct CertifiedValue {
  double mid = 0.0;
  double radius = 0.0;

  /// Guaranteed double lower bound on the true value (off by at most
  /// one ulp from mid - radius).
  double lower() const { return std::nextafter(mid - radius, -INFINITY); }
  double upper() const { return std::nextafter(mid + radius, INFINITY); }
};

namespace detail {

/// Exact sign of mid + sign*radius - threshold. The three doubles span at
/// most ~2150 bits as a fixed-point sum, so a 2400-bit scratch makes the
/// pairwise subtractions exact and the verdict free of rounding.
inline int exact_bound_sign(double mid, double radius, double threshold,
                            int radius_sign) {
  struct Scratch {
    mpfr_t x;
    Scratch() { mpfr_init2(x, 2400); }
    ~Scratch() { mpfr_clear(x); }
  };
  thread_local Scratch s;
  mpfr_set_d(s.x, mid, MPFR_RNDN);
  if (radius_sign >= 0) {
    mpfr_add_d(s.x, s.x, radius, MPFR_RNDN);
  } else {
    mpfr_sub_d(s.x, s.x, radius, MPFR_RNDN);
  }
  mpfr_sub_d(s.x, s.x, threshold, MPFR_RNDN);
  return mpfr_sgn(s.x);
}

}  // namespace detail

/// True iff mid - radius > threshold, decided exactly. A true result
/// proves the mathematical value strictly exceeds the threshold; false
/// means "not proven", never "disproven".
inline bool provably_greater(const CertifiedValue& v, double threshold) {
  if (!std::isfinite(v.mid) || !std::isfinite(v.radius) || v.radius < 0) {
    return false;
  }
  return detail::exact_bound_sign(v.mid, v.radius, threshold, -1) > 0;
}

/// True iff mid + radius < threshold (proves the value is strictly below).
inline bool provably_less(const CertifiedValue& v, double threshold) {
  if (!std::isfinite(v.mid) || !std::isfinite(v.radius) || v.radius < 0) {
    return false;
  }
  return detail::exact_bound_sign(v.mid, v.radius, threshold, +1) < 0;
}

/// True iff mid + radius <= threshold (proves the value cannot exceed it).
inline bool provably_at_most(const CertifiedValue& v, double threshold) {
  if (!std::isfinite(v.mid) || !std::isfinite(v.radius) || v.radius < 0) {
    return false;
  }
  return detail::exact_bound_sign(v.mid, v.radius, threshold, +1) <= 0;
}

/// Outward conversion of an mpfr enclosure into the double carrier.
inline CertifiedValue to_certified(const Interval& iv) {
  iv.check_ordered("to_certified");
  const int prec = iv.precision();
  mpfr_t t;
  mpfr_init2(t, prec);
  mpfr_add(t, iv.lo(), iv.hi(), MPFR_RNDN);
  mpfr_div_2ui(t, t, 1, MPFR_RNDN);
  const double mid = mpfr_get_d(t, MPFR_RNDN);
  mpfr_sub_d(t, iv.hi(), mid, MPFR_RNDU);
  const double r_up = mpfr_get_d(t, MPFR_RNDU);
  mpfr_d_sub(t, mid, iv.lo(), MPFR_RNDU);
  const double r_down = mpfr_get_d(t, MPFR_RNDU);
  mpfr_clear(t);
  const double radius = std::max({r_up, r_down, 0.0});
  if (!std::isfinite(mid) || !std::isfinite(radius)) {
    throw Error("to_certified: non-finite enclosure");
  }
  return {mid, radius};
}

/// Checks that two enclosures of the same true value overlap, then
/// returns the tighter one. Disjointness is an internal soundness
/// failure, not a recoverable condition. Recomputing a midpoint for the
/// literal intersection would reintroduce double rounding, so the tighter
/// verified enclosure is kept as-is.
inline CertifiedValue intersect(const CertifiedValue& a, const CertifiedValue& b,
                                const char* what) {
  if (a.lower() > b.upper() || b.lower() > a.upper()) {
    throw Error(std::string("disjoint certified enclosures in ") + what);
  }
  return a.radius <= b.radius ? a : b;
}

struct PrecisionConfig {
  int start_bits = 64;
  /// Each escalation doubles the working precision.
  int max_escalations = 4;
};

/// Re-runnable evaluation at a caller-chosen working precision.
using Producer = std::function<CertifiedValue(int precision_bits)>;

/// Re-evaluates at doubling precision until radius <= target_radius.
/// Throws InconclusiveError carrying the best enclosure if the cap is
/// reached first.
inline CertifiedValue escalate_precision(const Producer& produce,
                                         double target_radius,
                                         const PrecisionConfig& cfg = {}) {
  int bits = cfg.start_bits;
  CertifiedValue best{0.0, INFINITY};
  for (int step = 0; step <= cfg.max_escalations; ++step) {
    const CertifiedValue v = produce(bits);
    if (v.radius < best.radius) best = v;
    if (v.radius <= target_radius) return v;
    bits *= 2;
  }
  throw InconclusiveError(
      "escalate_precision: radius " + std::to_string(best.radius) +
          " still above target " + std::to_string(target_radius) +
          " at the precision cap",
      best.mid, best.radius);
}

enum class Certainty { kProven, kDisproven, kInconclusive };

struct ComparisonResult {
  Certainty certainty;
  /// Tightest enclosure produced during the comparison.
  CertifiedValue value;
};

/// Certified three-valued test of "value > threshold" with automatic
/// precision escalation. kDisproven means provably <= threshold.
inline ComparisonResult certified_greater(const Producer& produce,
                                          double threshold,
                                          const PrecisionConfig& cfg = {}) {
  int bits = cfg.start_bits;
  CertifiedValue best{0.0, INFINITY};
  for (int step = 0; step <= cfg.max_escalations; ++step) {
    const CertifiedValue v = produce(bits);
    if (v.radius < best.radius) best = v;
    if (provably_greater(v, threshold)) return {Certainty::kProven, v};
    if (provably_at_most(v, threshold)) return {Certainty::kDisproven, v};
    bits *= 2;
  }
  return {Certainty::kInconclusive, best};
}

/// Named constants of the bound family. The Rosser constant is carried
/// as the exact rational 125506/100000 and only rounded outward when a
/// working-precision enclosure is requested.
struct Constants {
  static constexpr std::uint64_t kRosserNumerator = 125506;
  static constexpr std::uint64_t kRosserDenominator = 100000;
  /// Ceiling literal for the achievable prime-count ratio: 0.104565.
  static constexpr std::uint64_t kCeilingNumerator = 104565;
  static constexpr std::uint64_t kCeilingDenominator = 1000000;

  static Interval rosser_c(int prec) {
    return Interval::from_rational(kRosserNumerator, kRosserDenominator, prec);
  }

  static Interval log2(int prec) { return Interval::log2_constant(prec); }

  static Interval log4(int prec) {
    const Interval l2 = Interval::log2_constant(prec);
    return add(l2, l2);
  }

  /// log(4)/C - 1, the supremum of ratios reachable by the theta bound.
  static Interval theta_ceiling(int prec) {
    return sub(div(log4(prec), rosser_c(prec)),
               Interval::from_integer(1, prec));
  }

  static CertifiedValue rosser_c_value(int prec) {
    return to_certified(rosser_c(prec));
  }
  static CertifiedValue log2_value(int prec) {
    return to_certified(log2(prec));
  }
  static CertifiedValue log4_value(int prec) {
    return to_certified(log4(prec));
  }

  /// Certified check that log(4)/C - 1 < 0.104565.
  static bool ceiling_below_literal(int prec) {
    const Interval ceiling = theta_ceiling(prec);
    const Interval literal =
        Interval::from_rational(kCeilingNumerator, kCeilingDenominator, prec);
    return mpfr_cmp(ceiling.hi(), literal.lo()) < 0;
  }
};

namespace detail {

inline void require(bool cond, const char* msg) {
  if (!cond) throw DomainError(msg);
}

/// log(4) - C - log(2)*log(4)/log(2n), the common factor of E, rho and
/// the theta coefficient.
inline Interval bracket_interval(std::uint64_t n, int prec) {
  const Interval l2 = Constants::log2(prec);
  const Interval l4 = add(l2, l2);
  const Interval c = Constants::rosser_c(prec);
  const Interval log_2n = Interval::from_integer(2 * n, prec).log();
  return sub(sub(l4, c), div(mul(l2, l4), log_2n));
}

}  // namespace detail

/// Certified log(m+x)/log(n+x) for m >= n >= 2, x >= 0.
inline CertifiedValue eval_g(std::uint64_t m, std::uint64_t n, double x,
                             int precision_bits) {
  detail::require(n >= 2 && m >= n, "eval_g: need m >= n >= 2");
  detail::require(std::isfinite(x) && x >= 0.0, "eval_g: need x >= 0");
  const Interval num = add(Interval::from_integer(m, precision_bits),
                           Interval::from_double(x, precision_bits))
                           .log();
  const Interval den = add(Interval::from_integer(n, precision_bits),
                           Interval::from_double(x, precision_bits))
                           .log();
  return to_certified(div(num, den));
}

/// Summation route for k(m,n): sum of log(1 + m/i) over i = 1..n divided
/// by log(m+n). The sum is accumulated at working precision round-to-
/// nearest while a running error budget collects, per term, the argument
/// rounding of m/i propagated through log1p (at most ~2 ulp of the term,
/// since x/(1+x) <= log(1+x)) plus the rounding of the addition (one ulp
/// of the running sum); the budget is folded into the radius.
inline CertifiedValue eval_k_sum_path(std::uint64_t m, std::uint64_t n,
                                      int precision_bits) {
  detail::require(n >= 2 && m >= n, "eval_k: need m >= n >= 2");
  const int prec = Interval::clamp_precision(precision_bits);
  if (m > (std::uint64_t{1} << 52)) {
    throw ResourceError("eval_k_sum_path: m too large for exact setup");
  }
  mpfr_t big_m, term, sum;
  mpfr_init2(big_m, prec);
  mpfr_init2(term, prec);
  mpfr_init2(sum, prec);
  mpfr_set_ui(big_m, static_cast<unsigned long>(m), MPFR_RNDN);
  mpfr_set_zero(sum, 1);
  const double unit = std::ldexp(1.0, -prec);
  double budget = 0.0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    mpfr_div_ui(term, big_m, static_cast<unsigned long>(i), MPFR_RNDN);
    mpfr_log1p(term, term, MPFR_RNDN);
    mpfr_add(sum, sum, term, MPFR_RNDN);
    const double term_up = mpfr_get_d(term, MPFR_RNDU);
    const double sum_up = mpfr_get_d(sum, MPFR_RNDU);
    budget += unit * (4.0 * term_up + 1.01 * sum_up);
  }
  budget = budget * 1.000001 + 1e-300;

  mpfr_t lo, hi;
  mpfr_init2(lo, prec);
  mpfr_init2(hi, prec);
  mpfr_sub_d(lo, sum, budget, MPFR_RNDD);
  mpfr_add_d(hi, sum, budget, MPFR_RNDU);
  const Interval numerator = Interval::from_endpoints(lo, hi, prec);
  mpfr_clear(lo);
  mpfr_clear(hi);
  mpfr_clear(big_m);
  mpfr_clear(term);
  mpfr_clear(sum);

  const Interval den = Interval::from_integer(m + n, prec).log();
  return to_certified(div(numerator, den));
}

/// Independent route for k(m,n) through log-factorial differences,
/// log(binomial(m+n, n)) / log(m+n), evaluated with log Gamma.
inline CertifiedValue eval_k_binomial_path(std::uint64_t m, std::uint64_t n,
                                           int precision_bits) {
  detail::require(n >= 2 && m >= n, "eval_k: need m >= n >= 2");
  const Interval lg_top =
      Interval::from_integer(m + n + 1, precision_bits).lngamma_increasing();
  const Interval lg_m =
      Interval::from_integer(m + 1, precision_bits).lngamma_increasing();
  const Interval lg_n =
      Interval::from_integer(n + 1, precision_bits).lngamma_increasing();
  const Interval num = sub(sub(lg_top, lg_m), lg_n);
  const Interval den = Interval::from_integer(m + n, precision_bits).log();
  return to_certified(div(num, den));
}

/// Certified k(m,n). Both routes are evaluated and must agree; the
/// returned enclosure is their intersection.
inline CertifiedValue eval_k(std::uint64_t m, std::uint64_t n,
                             int precision_bits) {
  const CertifiedValue summed = eval_k_sum_path(m, n, precision_bits);
  const CertifiedValue factorial = eval_k_binomial_path(m, n, precision_bits);
  return intersect(summed, factorial, "eval_k two-path agreement");
}

/// Certified E(n) = (n/log n) * (log 4 - C - log 2 * log 4 / log(2n)).
inline CertifiedValue eval_E(std::uint64_t n, int precision_bits) {
  detail::require(n >= 2, "eval_E: need n >= 2");
  const Interval ratio = div(Interval::from_integer(n, precision_bits),
                             Interval::from_integer(n, precision_bits).log());
  return to_certified(mul(ratio, detail::bracket_interval(n, precision_bits)));
}

/// Certified b(n) = C * n / log n, the Rosser prime-count majorant.
inline CertifiedValue eval_b(std::uint64_t n, int precision_bits) {
  detail::require(n >= 2, "eval_b: need n >= 2");
  const Interval ratio = div(Interval::from_integer(n, precision_bits),
                             Interval::from_integer(n, precision_bits).log());
  return to_certified(mul(Constants::rosser_c(precision_bits), ratio));
}

/// Certified rho(n) = (pi(n)/C) * (log 4 - C - log 2 * log 4 / log(2n)).
/// The caller supplies the exact prime count.
inline CertifiedValue eval_rho(std::uint64_t n, std::uint64_t pi_n,
                               int precision_bits) {
  detail::require(n >= 2, "eval_rho: need n >= 2");
  const Interval ratio = div(Interval::from_integer(pi_n, precision_bits),
                             Constants::rosser_c(precision_bits));
  return to_certified(mul(ratio, detail::bracket_interval(n, precision_bits)));
}

/// Certified (1/C) * (log 4 - C - log 2 * log 4 / log(2n)): the fraction
/// of pi(n) guaranteed as primes in ]n, 2n[ once n clears the threshold.
inline CertifiedValue eval_theta_coefficient(std::uint64_t n,
                                             int precision_bits) {
  detail::require(n >= 2, "eval_theta_coefficient: need n >= 2");
  return to_certified(div(detail::bracket_interval(n, precision_bits),
                          Constants::rosser_c(precision_bits)));
}

/// Certified enclosures of 4^n / sqrt(pi (n + 1/2)) and 4^n / sqrt(pi n),
/// which bracket the central binomial coefficient binomial(2n, n).
inline std::pair<CertifiedValue, CertifiedValue> central_binomial_bounds(
    std::uint64_t n, int precision_bits) {
  detail::require(n >= 1, "central_binomial_bounds: need n >= 1");
  const Interval four_n =
      Interval::power_of_two(static_cast<long>(2 * n), precision_bits);
  const Interval pi = Interval::pi_constant(precision_bits);
  const Interval n_plus_half =
      Interval::from_rational(2 * n + 1, 2, precision_bits);
  const Interval lo = div(four_n, mul(pi, n_plus_half).sqrt());
  const Interval hi =
      div(four_n, mul(pi, Interval::from_integer(n, precision_bits)).sqrt());
  return {to_certified(lo), to_certified(hi)};
}

}  // namespace sylvkit::bounds
