#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>

#include "sylvkit/errors.hpp"

namespace sylvkit::bounds {

static_assert(sizeof(unsigned long) >= 8,
              "sieve and valuation ranges assume 64-bit unsigned long");

/// Closed enclosure [lo, hi] of a real number, endpoints held as mpfr
/// values at a fixed working precision. Every operation rounds lo down
/// and hi up, so containment of the true value is preserved through any
/// expression tree. mpfr guarantees correctly rounded elementary
/// functions, which bounds the per-operation error by one ulp in the
/// chosen direction.
class Interval {
 public:
  explicit Interval(int precision_bits) : prec_(clamp_precision(precision_bits)) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }

  Interval(const Interval& other) : prec_(other.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }

  Interval(Interval&& other) noexcept : prec_(other.prec_) {
    mpfr_init2(lo_, 2);
    mpfr_init2(hi_, 2);
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
  }

  Interval& operator=(const Interval& other) {
    if (this != &other) {
      Interval copy(other);
      swap(copy);
    }
    return *this;
  }

  Interval& operator=(Interval&& other) noexcept {
    swap(other);
    return *this;
  }

  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  void swap(Interval& other) noexcept {
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
    std::swap(prec_, other.prec_);
  }

  int precision() const { return prec_; }
  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }

  /// Exact when the integer fits the working precision, outward otherwise.
  static Interval from_integer(std::uint64_t v, int precision_bits) {
    Interval r(precision_bits);
    mpfr_set_ui(r.lo_, static_cast<unsigned long>(v), MPFR_RNDD);
    mpfr_set_ui(r.hi_, static_cast<unsigned long>(v), MPFR_RNDU);
    return r;
  }

  /// num/den with directed rounding on both endpoints. Carries exact
  /// rational constants (such as 125506/100000) into the working
  /// precision without any intermediate binary approximation.
  static Interval from_rational(std::uint64_t num, std::uint64_t den,
                                int precision_bits) {
    if (den == 0) throw DomainError("Interval::from_rational: zero denominator");
    Interval r(precision_bits);
    mpfr_set_ui(r.lo_, static_cast<unsigned long>(num), MPFR_RNDD);
    mpfr_div_ui(r.lo_, r.lo_, static_cast<unsigned long>(den), MPFR_RNDD);
    mpfr_set_ui(r.hi_, static_cast<unsigned long>(num), MPFR_RNDU);
    mpfr_div_ui(r.hi_, r.hi_, static_cast<unsigned long>(den), MPFR_RNDU);
    return r;
  }

  /// Doubles are exact at any precision >= 53.
  static Interval from_double(double d, int precision_bits) {
    Interval r(precision_bits);
    mpfr_set_d(r.lo_, d, MPFR_RNDD);
    mpfr_set_d(r.hi_, d, MPFR_RNDU);
    return r;
  }

  static Interval from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi,
                                 int precision_bits) {
    Interval r(precision_bits);
    mpfr_set(r.lo_, lo, MPFR_RNDD);
    mpfr_set(r.hi_, hi, MPFR_RNDU);
    r.check_ordered("from_endpoints");
    return r;
  }

  /// Exact power of two (any precision).
  static Interval power_of_two(long exponent, int precision_bits) {
    Interval r(precision_bits);
    mpfr_set_ui_2exp(r.lo_, 1, exponent, MPFR_RNDD);
    mpfr_set_ui_2exp(r.hi_, 1, exponent, MPFR_RNDU);
    return r;
  }

  static Interval log2_constant(int precision_bits) {
    Interval r(precision_bits);
    mpfr_const_log2(r.lo_, MPFR_RNDD);
    mpfr_const_log2(r.hi_, MPFR_RNDU);
    return r;
  }

  static Interval pi_constant(int precision_bits) {
    Interval r(precision_bits);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
  }

  friend Interval add(const Interval& a, const Interval& b) {
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  friend Interval sub(const Interval& a, const Interval& b) {
    Interval r(std::max(a.prec_, b.prec_));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }

  /// General sign-aware product: min/max over all endpoint products,
  /// each product rounded in the safe direction.
  friend Interval mul(const Interval& a, const Interval& b) {
    const int prec = std::max(a.prec_, b.prec_);
    Interval r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    bool first = true;
    for (int i = 0; i < 4; ++i) {
      mpfr_srcptr x = (i & 1) ? a.hi_ : a.lo_;
      mpfr_srcptr y = (i & 2) ? b.hi_ : b.lo_;
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
    mpfr_clear(t);
    return r;
  }

  /// Division; the divisor interval must not contain zero.
  friend Interval div(const Interval& a, const Interval& b) {
    if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0) {
      throw DomainError("Interval division by an interval containing zero");
    }
    const int prec = std::max(a.prec_, b.prec_);
    Interval r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    bool first = true;
    for (int i = 0; i < 4; ++i) {
      mpfr_srcptr x = (i & 1) ? a.hi_ : a.lo_;
      mpfr_srcptr y = (i & 2) ? b.hi_ : b.lo_;
      mpfr_div(t, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_div(t, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
    mpfr_clear(t);
    return r;
  }

  /// Natural log; requires a strictly positive interval.
  Interval log() const {
    if (mpfr_sgn(lo_) <= 0) {
      throw DomainError("Interval::log of a non-positive interval");
    }
    Interval r(prec_);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  Interval sqrt() const {
    if (mpfr_sgn(lo_) < 0) {
      throw DomainError("Interval::sqrt of a negative interval");
    }
    Interval r(prec_);
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  /// log Gamma, valid only on x >= 2 where it is increasing.
  Interval lngamma_increasing() const {
    if (mpfr_cmp_ui(lo_, 2) < 0) {
      throw DomainError("Interval::lngamma_increasing requires x >= 2");
    }
    Interval r(prec_);
    mpfr_lngamma(r.lo_, lo_, MPFR_RNDD);
    mpfr_lngamma(r.hi_, hi_, MPFR_RNDU);
    return r;
  }

  bool intersects(const Interval& other) const {
    return mpfr_cmp(lo_, other.hi_) <= 0 && mpfr_cmp(other.lo_, hi_) <= 0;
  }

  double lower_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upper_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }

  /// Width rounded up, as a double.
  double width_d() const {
    mpfr_t w;
    mpfr_init2(w, prec_);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    const double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
  }

  void check_ordered(const char* where) const {
    if (!mpfr_number_p(lo_) || !mpfr_number_p(hi_) || mpfr_cmp(lo_, hi_) > 0) {
      throw Error(std::string("Interval: invalid endpoints in ") + where);
    }
  }

  static int clamp_precision(int bits) {
    return std::max(bits, 53);
  }

 private:
  mpfr_t lo_;
  mpfr_t hi_;
  int prec_;
};

}  // namespace sylvkit::bounds
