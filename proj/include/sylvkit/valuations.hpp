#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sylvkit/errors.hpp"
#include "sylvkit/primes.hpp"

namespace sylvkit::valuations {

/// The product of n consecutive integers starting at m + 1:
///   (m+1)(m+2)...(m+n)
/// Only the pair (m, n) is carried; the product itself is materialized
/// nowhere except in the small-scale brute-force oracle.
struct ConsecutiveProduct {
  std::uint64_t m;
  std::uint64_t n;

  ConsecutiveProduct(std::uint64_t m_, std::uint64_t n_) : m(m_), n(n_) {
    if (n < 2 || m < n) {
      throw DomainError("ConsecutiveProduct: need m >= n >= 2, got m=" +
                        std::to_string(m) + " n=" + std::to_string(n));
    }
  }

  std::uint64_t first_term() const { return m + 1; }
  std::uint64_t last_term() const { return m + n; }
};

/// A prime q > n dividing the product, together with the unique term it
/// divides (unique because q exceeds the window length n).
struct PrimeWitness {
  std::uint64_t prime;
  std::uint64_t term;

  friend bool operator==(const PrimeWitness&, const PrimeWitness&) = default;
};

struct LargePrimeWitness {
  ConsecutiveProduct product;
  std::vector<PrimeWitness> primes;  // ascending, distinct
};

namespace detail {

inline void require_prime(std::uint64_t q, const char* where) {
  if (!primes::is_prime_u64(q)) {
    throw DomainError(std::string(where) + ": q=" + std::to_string(q) +
                      " is not prime");
  }
}

}  // namespace detail

/// v_q(n!) by Legendre's formula: sum of floor(n / q^i) over i >= 1.
/// Pure integer arithmetic; the sum stops once q^i > n.
inline std::uint64_t factorial_valuation(std::uint64_t n, std::uint64_t q) {
  detail::require_prime(q, "factorial_valuation");
  std::uint64_t total = 0;
  for (std::uint64_t power = q; power <= n; ) {
    total += n / power;
    if (power > n / q) break;  // next power would overflow past n
    power *= q;
  }
  return total;
}

/// Exact v_q of the consecutive product, as the termwise difference of
/// floor sums: sum_i (floor((m+n)/q^i) - floor(m/q^i)). Equals
/// factorial_valuation(m+n, q) - factorial_valuation(m, q).
inline std::uint64_t product_valuation(const ConsecutiveProduct& p,
                                       std::uint64_t q) {
  detail::require_prime(q, "product_valuation");
  const std::uint64_t top = p.m + p.n;
  std::uint64_t total = 0;
  for (std::uint64_t power = q; power <= top; ) {
    total += top / power - p.m / power;
    if (power > top / q) break;
    power *= q;
  }
  return total;
}

struct ValuationBounds {
  std::uint64_t lo;
  std::uint64_t hi;
};

/// Largest e >= 0 with q^e <= x, by repeated multiplication.
/// Never touches floating point, so exact powers cannot be misrounded.
inline std::uint64_t floor_log_integer(std::uint64_t x, std::uint64_t q) {
  std::uint64_t e = 0;
  std::uint64_t power = 1;
  while (power <= x / q) {
    power *= q;
    ++e;
  }
  return e;
}

/// Bracket for v_q(P(m,n)):
///   v_q(n!)  <=  v_q(P(m,n))  <=  v_q(n!) + max{e : q^e <= m+n}.
inline ValuationBounds valuation_bounds(const ConsecutiveProduct& p,
                                        std::uint64_t q) {
  detail::require_prime(q, "valuation_bounds");
  const std::uint64_t lo = factorial_valuation(p.n, q);
  return {lo, lo + floor_log_integer(p.m + p.n, q)};
}

/// All primes q with n < q <= m+n dividing the product, each with its
/// witness term. A prime q > n divides some term iff the half-open block
/// ]m, m+n] contains a multiple of q, i.e. floor((m+n)/q) > floor(m/q);
/// that multiple is then unique.
inline LargePrimeWitness large_prime_divisors(const ConsecutiveProduct& p,
                                              const primes::PrimeTable& table) {
  const std::uint64_t top = p.m + p.n;
  if (table.limit() < top) {
    throw CoverageError("large_prime_divisors: table limit " +
                        std::to_string(table.limit()) + " < m+n = " +
                        std::to_string(top));
  }
  LargePrimeWitness witness{p, {}};
  table.for_each_prime(p.n + 1, top, [&](std::uint64_t q) {
    const std::uint64_t k = top / q;
    if (k > p.m / q) {
      witness.primes.push_back({q, k * q});
    }
    return true;
  });
  return witness;
}

/// Scale guard for the brute-force oracle (largest admissible m+n).
inline constexpr std::uint64_t kBruteForceScaleGuard = 10'000;

/// Complete factorization of the product by trial-dividing every term.
/// Test oracle only; refuses above the scale guard.
inline std::map<std::uint64_t, std::uint64_t> brute_force_product_factorization(
    const ConsecutiveProduct& p,
    std::uint64_t scale_guard = kBruteForceScaleGuard) {
  if (p.m + p.n > scale_guard) {
    throw ScaleGuardError(
        "brute_force_product_factorization: m+n = " + std::to_string(p.m + p.n) +
        " exceeds scale guard " + std::to_string(scale_guard));
  }
  std::map<std::uint64_t, std::uint64_t> factors;
  for (std::uint64_t term = p.first_term(); term <= p.last_term(); ++term) {
    std::uint64_t rest = term;
    for (std::uint64_t d = 2; d * d <= rest; ++d) {
      while (rest % d == 0) {
        ++factors[d];
        rest /= d;
      }
    }
    if (rest > 1) ++factors[rest];
  }
  return factors;
}

}  // namespace sylvkit::valuations
