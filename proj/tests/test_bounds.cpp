#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <random>

#include "support/oracles.hpp"
#include "sylvkit/bounds.hpp"
#include "sylvkit/primes.hpp"

using namespace sylvkit::bounds;
using sylvkit::primes::PrimeTable;
using u64 = std::uint64_t;

namespace {

/// Escalating proof that producer a stays strictly above producer b.
bool prove_strictly_above(const Producer& a, const Producer& b,
                          const PrecisionConfig& cfg = {}) {
  int bits = cfg.start_bits;
  for (int step = 0; step <= cfg.max_escalations; ++step) {
    const CertifiedValue va = a(bits);
    const CertifiedValue vb = b(bits);
    if (provably_greater(va, vb.upper())) return true;
    bits *= 2;
  }
  return false;
}

bool enclosures_intersect(const CertifiedValue& x, const CertifiedValue& y) {
  return x.lower() <= y.upper() && y.lower() <= x.upper();
}

}  // namespace

TEST_CASE("eval_g examples") {
  // m = n makes numerator and denominator identical.
  for (double x : {0.0, 0.5, 3.0, 77.25}) {
    const CertifiedValue v = eval_g(5, 5, x, 64);
    CHECK(v.lower() <= 1.0);
    CHECK(v.upper() >= 1.0);
    CHECK(v.radius < 1e-12);
  }
  // log(4)/log(2) = 2 exactly.
  const CertifiedValue two = eval_g(4, 2, 0.0, 64);
  CHECK(two.lower() <= 2.0);
  CHECK(two.upper() >= 2.0);
  CHECK(two.radius < 1e-12);

  CHECK_THROWS_AS((void)eval_g(3, 5, 0.0, 64), sylvkit::DomainError);
  CHECK_THROWS_AS((void)eval_g(5, 5, -1.0, 64), sylvkit::DomainError);

  CHECK(prove_strictly_above([](int bits) { return eval_g(7, 3, 1.0, bits); },
                             [](int bits) { return eval_g(7, 3, 2.0, bits); }));
}

TEST_CASE("g is decreasing in x for m > n (sampled rational offsets)") {
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 120; ++rep) {
    const u64 n = 2 + rng() % 50;
    const u64 m = n + 1 + rng() % 200;
    const double x1 = static_cast<double>(rng() % 380) / 4.0;  // 0..94.75
    const double x2 = x1 + 0.25 + static_cast<double>(rng() % 20) / 4.0;
    REQUIRE(prove_strictly_above(
        [&](int bits) { return eval_g(m, n, x1, bits); },
        [&](int bits) { return eval_g(m, n, x2, bits); }));
  }
}

TEST_CASE("eval_k examples against high-precision log ratios") {
  const CertifiedValue k22 = eval_k(2, 2, 64);
  CHECK(k22.mid == doctest::Approx(1.2924812504).epsilon(1e-9));
  {
    Interval ref = div(Interval::from_integer(6, 512).log(),
                       Interval::from_integer(4, 512).log());
    CHECK(enclosures_intersect(k22, to_certified(ref)));
  }
  const CertifiedValue k55 = eval_k(5, 5, 64);
  CHECK(k55.mid == doctest::Approx(2.4014005408).epsilon(1e-9));
  {
    Interval ref = div(Interval::from_integer(252, 512).log(),
                       Interval::from_integer(10, 512).log());
    CHECK(enclosures_intersect(k55, to_certified(ref)));
  }
  CHECK_THROWS_AS((void)eval_k(3, 5, 64), sylvkit::DomainError);
}

TEST_CASE("k(n,n) agrees with exact central binomial coefficients") {
  for (unsigned n = 2; n <= 64; ++n) {
    const oracle::BigInt binom(oracle::binomial_exact(2 * n, n));
    // Reference enclosure for log(binomial)/log(2n) from the exact
    // integer: outward log over an outward integer value.
    const double log_lo = binom.log_lower();
    const double log_up = binom.log_upper();
    const CertifiedValue den = to_certified(
        Interval::from_integer(2 * n, 256).log());
    const CertifiedValue k = eval_k(n, n, 64);
    REQUIRE(k.upper() * den.upper() >= log_lo);
    REQUIRE(k.lower() * den.lower() <= log_up);
  }
}

TEST_CASE("two k-routes produce intersecting enclosures") {
  std::mt19937_64 rng(202);
  for (int rep = 0; rep < 150; ++rep) {
    const u64 n = 2 + rng() % 400;
    const u64 m = n + rng() % 5000;
    const CertifiedValue summed = eval_k_sum_path(m, n, 64);
    const CertifiedValue factorial = eval_k_binomial_path(m, n, 64);
    REQUIRE(enclosures_intersect(summed, factorial));
    // eval_k is their intersection and must not throw.
    const CertifiedValue joint = eval_k(m, n, 64);
    REQUIRE(joint.radius <= summed.radius + 1e-18);
    REQUIRE(joint.radius <= factorial.radius + 1e-18);
  }
}

TEST_CASE("k is increasing in m (sampled)") {
  std::mt19937_64 rng(303);
  for (int rep = 0; rep < 80; ++rep) {
    const u64 n = 2 + rng() % 100;
    const u64 b = n + rng() % 2000;
    const u64 a = b + 1 + rng() % 2000;
    REQUIRE(prove_strictly_above([&](int bits) { return eval_k(a, n, bits); },
                                 [&](int bits) { return eval_k(b, n, bits); }));
  }
}

TEST_CASE("eval_E examples: thresholds at 1100, 1411, 1705") {
  CHECK(provably_greater(eval_E(1100, 64), 1.0));
  CHECK(provably_greater(eval_E(1411, 64), 2.0));
  CHECK(provably_greater(eval_E(1705, 64), 3.0));
  // Values frozen from the 256-bit scan.
  CHECK(eval_E(1100, 128).mid == doctest::Approx(1.002126128617).epsilon(1e-9));
  CHECK(eval_E(1411, 128).mid == doctest::Approx(2.002600008068).epsilon(1e-9));
  CHECK(eval_E(1705, 128).mid == doctest::Approx(3.003074539837).epsilon(1e-9));
  // One step below each threshold the value is provably not above it.
  CHECK(provably_at_most(eval_E(1099, 128), 1.0));
  CHECK(provably_at_most(eval_E(1410, 128), 2.0));
  CHECK(provably_at_most(eval_E(1704, 128), 3.0));

  CHECK_THROWS_AS((void)eval_E(1, 64), sylvkit::DomainError);
  CHECK_THROWS_AS((void)eval_E(0, 64), sylvkit::DomainError);
}

TEST_CASE("E is increasing for m > n >= 3 (sampled up to 10^6)") {
  std::mt19937_64 rng(404);
  for (int rep = 0; rep < 150; ++rep) {
    const u64 n = 3 + rng() % 999'000;
    const u64 m = n + 1 + rng() % 1000;
    REQUIRE(prove_strictly_above([&](int bits) { return eval_E(m, bits); },
                                 [&](int bits) { return eval_E(n, bits); }));
  }
}

TEST_CASE("exact-identity regrouping of E agrees with the direct form") {
  // E(n) = (n/log n)(log4 - C) * (1 - (1/log 2n) * log2*log4/(log4 - C))
  const auto regrouped = [](u64 n, int prec) {
    const Interval l2 = Constants::log2(prec);
    const Interval l4 = add(l2, l2);
    const Interval c = Constants::rosser_c(prec);
    const Interval gap = sub(l4, c);
    const Interval log_n = Interval::from_integer(n, prec).log();
    const Interval log_2n = Interval::from_integer(2 * n, prec).log();
    const Interval one = Interval::from_integer(1, prec);
    const Interval factor =
        sub(one, div(div(mul(l2, l4), gap), log_2n));
    return to_certified(
        mul(mul(div(Interval::from_integer(n, prec), log_n), gap), factor));
  };
  std::mt19937_64 rng(505);
  for (int rep = 0; rep < 100; ++rep) {
    const u64 n = 2 + rng() % 1'000'000;
    REQUIRE(enclosures_intersect(eval_E(n, 64), regrouped(n, 64)));
  }
}

TEST_CASE("eval_b examples and the Rosser bound on a sieve prefix") {
  // 2*1.25506/log 2, frozen from 256-bit evaluation.
  CHECK(eval_b(2, 128).mid == doctest::Approx(3.6213379).epsilon(1e-7));
  CHECK(eval_b(8, 64).lower() > 4.0);  // pi(8) = 4
  CHECK_THROWS_AS((void)eval_b(1, 64), sylvkit::DomainError);

  const auto table = PrimeTable::build(20'000);
  for (u64 n = 2; n <= 20'000; ++n) {
    REQUIRE(provably_greater(eval_b(n, 64),
                             static_cast<double>(table.prime_count(n))));
  }
}

TEST_CASE("Rosser bound survives its tightest point n = 113") {
  // pi(113) = 30 and C*113/log(113) is barely above 30.
  const auto table = PrimeTable::build(120);
  CHECK(table.prime_count(113) == 30);
  const CertifiedValue b = eval_b(113, 64);
  CHECK(provably_greater(b, 30.0));
  CHECK(b.mid == doctest::Approx(30.000030765).epsilon(1e-9));
}

TEST_CASE("pi(10^6) sits below the certified b(10^6)") {
  const auto table = PrimeTable::build(1'000'000);
  const u64 pi = table.prime_count(1'000'000);
  CHECK(pi == 78498);
  CHECK(provably_greater(eval_b(1'000'000, 64), static_cast<double>(pi)));
}

TEST_CASE("eval_rho boundary: provable at 1123, not at 1122") {
  const auto table = PrimeTable::build(1200);
  const u64 pi_1123 = table.prime_count(1123);
  const u64 pi_1122 = table.prime_count(1122);
  CHECK(pi_1123 == 188);
  CHECK(pi_1122 == 187);

  CHECK(provably_greater(eval_rho(1123, pi_1123, 64), 1.0));
  // Frozen boundary scan: rho(1122) = 0.998336970091 <= 1, so the
  // comparison must stay unproven at any precision and the high-precision
  // evaluation confirms the value is below 1.
  CHECK_FALSE(provably_greater(eval_rho(1122, pi_1122, 256), 1.0));
  CHECK(provably_less(eval_rho(1122, pi_1122, 256), 1.0));
  CHECK(eval_rho(1122, pi_1122, 256).mid ==
        doctest::Approx(0.998336970091).epsilon(1e-9));

  const CertifiedValue zero = eval_rho(50, 0, 64);
  CHECK(zero.mid == 0.0);
  CHECK(zero.radius <= 1e-18);

  CHECK_THROWS_AS((void)eval_rho(1, 0, 64), sylvkit::DomainError);
}

TEST_CASE("theta coefficient crosses 0.05 between 620633 and 620634") {
  CHECK(provably_at_most(eval_theta_coefficient(620'633, 128), 0.05));
  CHECK(provably_greater(eval_theta_coefficient(620'634, 128), 0.05));
}

TEST_CASE("central binomial bounds: frozen n=1 values and containment") {
  const auto [lo1, hi1] = central_binomial_bounds(1, 128);
  CHECK(lo1.mid == doctest::Approx(1.842635464).epsilon(1e-7));
  CHECK(hi1.mid == doctest::Approx(2.256758334).epsilon(1e-7));
  CHECK(lo1.upper() <= 2.0);
  CHECK(hi1.lower() >= 2.0);

  const auto [lo5, hi5] = central_binomial_bounds(5, 64);
  CHECK(lo5.upper() <= 252.0);
  CHECK(hi5.lower() >= 252.0);

  for (unsigned n = 1; n <= 64; ++n) {
    const auto [lo, hi] = central_binomial_bounds(n, 64);
    const oracle::BigInt binom(oracle::binomial_exact(2 * n, n));
    REQUIRE(binom.at_least(lo.upper()));
    REQUIRE(binom.at_most(hi.lower()));
  }
  CHECK_THROWS_AS((void)central_binomial_bounds(0, 64), sylvkit::DomainError);
}

TEST_CASE("key inequality k(n,n) > pi(n) + E(n) - 1 on sampled n") {
  const auto table = PrimeTable::build(10'000);
  std::mt19937_64 rng(606);
  std::vector<u64> samples = {3, 4, 5, 10, 113, 1000, 9973, 10'000};
  for (int rep = 0; rep < 60; ++rep) samples.push_back(3 + rng() % 9'998);
  for (u64 n : samples) {
    const double pi = static_cast<double>(table.prime_count(n));
    REQUIRE(prove_strictly_above(
        [&](int bits) { return eval_k(n, n, bits); },
        [&](int bits) {
          const CertifiedValue e = eval_E(n, bits);
          return CertifiedValue{pi + e.mid - 1.0, e.radius};
        }));
  }
}
