#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "sylvkit/errors.hpp"

namespace sylvkit::primes {

struct SieveConfig {
  /// Hard cap on the table limit; exceeding it raises ResourceError.
  std::uint64_t max_limit = 1'000'000'000;
  /// Numbers sieved per segment during construction.
  std::uint64_t segment_size = 1u << 20;
};

/// Exact primality and prime counts over [0, limit].
///
/// Storage is one bit per integer plus one running count per 64-number
/// word, so prime_count() is a word lookup plus a popcount. The table is
/// immutable after construction and safe to read from any number of
/// threads.
class PrimeTable {
 public:
  /// Sieves [0, limit]. limit must be >= 2 and within config.max_limit.
  static PrimeTable build(std::uint64_t limit, const SieveConfig& config = {}) {
    if (limit < 2) {
      throw DomainError("PrimeTable::build: limit must be >= 2, got " +
                        std::to_string(limit));
    }
    if (limit > config.max_limit) {
      throw ResourceError("PrimeTable::build: limit " + std::to_string(limit) +
                          " exceeds configured maximum " +
                          std::to_string(config.max_limit));
    }
    PrimeTable table;
    table.limit_ = limit;
    table.sieve(config.segment_size == 0 ? (1u << 20) : config.segment_size);
    table.build_counts();
    return table;
  }

  std::uint64_t limit() const { return limit_; }

  /// Exact primality for x <= limit.
  bool is_prime(std::uint64_t x) const {
    check_covered(x);
    return bit(x);
  }

  /// Exact pi(x), the number of primes <= x.
  std::uint64_t prime_count(std::uint64_t x) const {
    check_covered(x);
    const std::uint64_t word = x >> 6;
    const std::uint64_t mask = (x % 64 == 63)
                                   ? ~std::uint64_t{0}
                                   : ((std::uint64_t{1} << (x % 64 + 1)) - 1);
    return cumulative_[word] + std::popcount(bits_[word] & mask);
  }

  /// All primes p with lo < p < hi, ascending. Requires hi <= limit.
  std::vector<std::uint64_t> primes_in_open_interval(std::uint64_t lo,
                                                     std::uint64_t hi) const {
    if (lo >= hi) {
      throw DomainError("primes_in_open_interval: need lo < hi");
    }
    check_covered(hi);
    std::vector<std::uint64_t> out;
    for_each_prime(lo + 1, hi - 1, [&](std::uint64_t p) {
      out.push_back(p);
      return true;
    });
    return out;
  }

  /// Visits primes in [lo, hi] ascending until fn returns false.
  /// Returns false iff the visit was cut short.
  template <typename Fn>
  bool for_each_prime(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
    if (hi > limit_) {
      throw CoverageError("PrimeTable: query range end " + std::to_string(hi) +
                          " exceeds table limit " + std::to_string(limit_));
    }
    if (lo > hi) return true;
    std::uint64_t word = lo >> 6;
    const std::uint64_t last_word = hi >> 6;
    std::uint64_t chunk = bits_[word] & ~((std::uint64_t{1} << (lo % 64)) - 1);
    while (true) {
      while (chunk != 0) {
        const int b = std::countr_zero(chunk);
        const std::uint64_t p = (word << 6) + static_cast<std::uint64_t>(b);
        if (p > hi) return true;
        if (!fn(p)) return false;
        chunk &= chunk - 1;
      }
      if (word == last_word) return true;
      chunk = bits_[++word];
    }
  }

 private:
  PrimeTable() = default;

  void check_covered(std::uint64_t x) const {
    if (x > limit_) {
      throw CoverageError("PrimeTable: query " + std::to_string(x) +
                          " exceeds table limit " + std::to_string(limit_));
    }
  }

  bool bit(std::uint64_t x) const {
    return (bits_[x >> 6] >> (x % 64)) & 1u;
  }

  void set_composite(std::vector<std::uint64_t>& words, std::uint64_t x) {
    words[x >> 6] &= ~(std::uint64_t{1} << (x % 64));
  }

  void sieve(std::uint64_t segment_size) {
    const std::uint64_t words = (limit_ >> 6) + 1;
    bits_.assign(words, ~std::uint64_t{0});
    // 0 and 1 are not prime.
    bits_[0] &= ~std::uint64_t{3};

    // Base primes up to sqrt(limit) by a plain sieve.
    std::uint64_t root = 1;
    while ((root + 1) * (root + 1) <= limit_) ++root;
    std::vector<bool> small(root + 1, true);
    std::vector<std::uint64_t> base;
    for (std::uint64_t p = 2; p <= root; ++p) {
      if (!small[p]) continue;
      base.push_back(p);
      for (std::uint64_t q = p * p; q <= root; q += p) small[q] = false;
    }

    for (std::uint64_t seg_lo = 2; seg_lo <= limit_; seg_lo += segment_size) {
      const std::uint64_t seg_hi =
          (limit_ - seg_lo < segment_size - 1) ? limit_ : seg_lo + segment_size - 1;
      for (std::uint64_t p : base) {
        std::uint64_t start = p * p;
        if (start > seg_hi) break;
        if (start < seg_lo) start = ((seg_lo + p - 1) / p) * p;
        for (std::uint64_t q = start; q <= seg_hi; q += p) {
          set_composite(bits_, q);
        }
      }
    }
  }

  void build_counts() {
    cumulative_.resize(bits_.size());
    std::uint64_t running = 0;
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      cumulative_[w] = running;
      running += static_cast<std::uint64_t>(std::popcount(bits_[w]));
    }
  }

  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> cumulative_;
};

inline PrimeTable build_table(std::uint64_t limit, const SieveConfig& config = {}) {
  return PrimeTable::build(limit, config);
}

/// Trial-division primality for standalone checks (valuation arguments).
inline bool is_prime_u64(std::uint64_t q) {
  if (q < 2) return false;
  if (q % 2 == 0) return q == 2;
  if (q % 3 == 0) return q == 3;
  for (std::uint64_t d = 5; d * d <= q; d += 6) {
    if (q % d == 0 || q % (d + 2) == 0) return false;
  }
  return true;
}

}  // namespace sylvkit::primes
