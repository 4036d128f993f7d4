#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <thread>
#include <vector>

#include "support/oracles.hpp"
#include "sylvkit/primes.hpp"

using sylvkit::primes::PrimeTable;
using sylvkit::primes::SieveConfig;

TEST_CASE("small table enumerates the known primes") {
  const auto table = PrimeTable::build(10);
  CHECK(table.primes_in_open_interval(0, 10) ==
        std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(table.prime_count(10) == 4);
  CHECK(table.prime_count(1) == 0);
  CHECK(table.prime_count(2) == 1);
}

TEST_CASE("boundary table at limit 2") {
  const auto table = PrimeTable::build(2);
  CHECK(table.prime_count(2) == 1);
  CHECK(table.is_prime(2));
  CHECK_FALSE(table.is_prime(1));
  CHECK_FALSE(table.is_prime(0));
}

TEST_CASE("pi(1100) matches the trial-division oracle") {
  const auto table = PrimeTable::build(1100);
  CHECK(table.prime_count(1100) == 184);
  CHECK(oracle::prime_count_trial(1100) == 184);
}

TEST_CASE("prime_count agrees with trial division up to 10^4") {
  const std::uint64_t limit = 10'000;
  const auto table = PrimeTable::build(limit);
  const auto expected = oracle::prime_count_table_trial(limit);
  for (std::uint64_t x = 0; x <= limit; ++x) {
    REQUIRE(table.prime_count(x) == expected[x]);
  }
}

TEST_CASE("prime_count is nondecreasing and matches is_prime steps") {
  const auto table = PrimeTable::build(5000);
  std::uint64_t prev = 0;
  for (std::uint64_t x = 0; x <= 5000; ++x) {
    const std::uint64_t cur = table.prime_count(x);
    REQUIRE(cur >= prev);
    REQUIRE(cur - prev == (table.is_prime(x) ? 1u : 0u));
    prev = cur;
  }
}

TEST_CASE("open-interval examples") {
  const auto table = PrimeTable::build(100);
  CHECK(table.primes_in_open_interval(3, 6) == std::vector<std::uint64_t>{5});
  CHECK(table.primes_in_open_interval(10, 20) ==
        std::vector<std::uint64_t>{11, 13, 17, 19});
}

TEST_CASE("open-interval count identity over [n, 2n[") {
  const std::uint64_t limit = 20'000;
  const auto table = PrimeTable::build(limit);
  for (std::uint64_t n = 2; n <= 10'000; ++n) {
    const auto primes = table.primes_in_open_interval(n, 2 * n);
    REQUIRE(primes.size() ==
            table.prime_count(2 * n - 1) - table.prime_count(n));
  }
}

TEST_CASE("interval between 1100 and 2200 against frozen oracle count") {
  // 143 primes strictly between 1100 and 2200, frozen from the
  // trial-division oracle below.
  const auto table = PrimeTable::build(2200);
  const auto primes = table.primes_in_open_interval(1100, 2200);
  CHECK(primes.size() == 143);

  std::uint64_t oracle_count = 0;
  for (std::uint64_t v = 1101; v <= 2199; ++v) {
    if (oracle::is_prime_trial(v)) ++oracle_count;
  }
  CHECK(oracle_count == primes.size());
}

TEST_CASE("coverage violations raise instead of extrapolating") {
  const auto table = PrimeTable::build(100);
  CHECK_THROWS_AS((void)table.prime_count(101), sylvkit::CoverageError);
  CHECK_THROWS_AS((void)table.is_prime(101), sylvkit::CoverageError);
  CHECK_THROWS_AS((void)table.primes_in_open_interval(50, 101),
                  sylvkit::CoverageError);
  CHECK_THROWS_AS((void)table.primes_in_open_interval(6, 6),
                  sylvkit::DomainError);
}

TEST_CASE("limit cap raises a resource error naming the cap") {
  SieveConfig config;
  config.max_limit = 1000;
  CHECK_THROWS_WITH_AS((void)PrimeTable::build(1001, config),
                       doctest::Contains("1000"), sylvkit::ResourceError);
  CHECK_THROWS_AS((void)PrimeTable::build(1), sylvkit::DomainError);
}

TEST_CASE("segment size does not change the table") {
  SieveConfig tiny;
  tiny.segment_size = 64;
  const auto a = PrimeTable::build(100'000, tiny);
  const auto b = PrimeTable::build(100'000);
  for (std::uint64_t x : {0ul, 1ul, 2ul, 999ul, 65'536ul, 99'991ul, 100'000ul}) {
    REQUIRE(a.prime_count(x) == b.prime_count(x));
  }
  CHECK(a.prime_count(100'000) == 9592);
}

TEST_CASE("pi(10^6) = 78498, recomputed by trial division") {
  const auto table = PrimeTable::build(1'000'000);
  CHECK(table.prime_count(1'000'000) == 78498);

  std::uint64_t recount = 0;
  for (std::uint64_t v = 2; v <= 1'000'000; ++v) {
    if (oracle::is_prime_trial(v)) ++recount;
  }
  CHECK(recount == 78498);
}

TEST_CASE("concurrent reads see one immutable table") {
  const auto table = PrimeTable::build(50'000);
  std::vector<std::uint64_t> counts(4, 0);
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      std::uint64_t acc = 0;
      for (std::uint64_t x = 2 + t; x <= 50'000; x += 4) {
        acc += table.prime_count(x);
      }
      counts[t] = acc;
    });
  }
  for (auto& th : threads) th.join();

  std::uint64_t serial = 0;
  for (int t = 0; t < 4; ++t) {
    for (std::uint64_t x = 2 + t; x <= 50'000; x += 4) {
      serial += table.prime_count(x);
    }
    serial -= counts[t];
  }
  CHECK(serial == 0);
}
