#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "primexp/counting.hpp"
#include "primexp/scan.hpp"

using namespace primexp;

TEST_CASE("k-free counts against exhaustive enumeration") {
  for (std::uint32_t k = 2; k <= 4; ++k) {
    for (std::uint64_t x : {1ull, 2ull, 7ull, 63ull, 64ull, 100ull, 1000ull, 2000ull}) {
      const auto ref = oracle::count_kfree_slow(x, k);
      CHECK(count_k_free_sieve(x, k).count == ref);
      CHECK(count_k_free_mobius(x, k).count == ref);
    }
  }
}

TEST_CASE("k-full counts against exhaustive enumeration") {
  for (std::uint32_t k = 2; k <= 4; ++k)
    for (std::uint64_t x : {1ull, 3ull, 4ull, 8ull, 100ull, 5000ull, 100000ull})
      CHECK(count_k_full(x, k).count == oracle::count_kfull_slow(x, k));
}

TEST_CASE("frozen small values") {
  // All verified by the exhaustive oracle above; kept as explicit anchors.
  CHECK(count_k_free_sieve(100, 2).count == 61);
  CHECK(count_k_free_sieve(100, 3).count == 85);
  CHECK(count_k_free_sieve(100, 4).count == 93);
  CHECK(count_k_full(100, 2).count == 14);
  CHECK(count_k_full(100, 3).count == 7);
  CHECK(count_k_full(1, 2).count == 1);
  CHECK(count_k_full(3, 2).count == 1);
  CHECK(count_k_full(4, 2).count == 2);
}

TEST_CASE("methods agree on larger inputs") {
  for (std::uint32_t k = 2; k <= 5; ++k)
    for (std::uint64_t x : {99991ull, 1000000ull, 12345678ull})
      CHECK(count_k_free_sieve(x, k).count == count_k_free_mobius(x, k).count);
}

TEST_CASE("monotonicity in k") {
  for (std::uint64_t x : {100ull, 100000ull}) {
    for (std::uint32_t k = 2; k <= 6; ++k) {
      CHECK(count_k_free_mobius(x, k).count <= count_k_free_mobius(x, k + 1).count);
      CHECK(count_k_full(x, k + 1).count <= count_k_full(x, k).count);
    }
  }
}

TEST_CASE("counts connect to the scan histograms") {
  const std::uint64_t x = 200000;
  const auto agg = scan_range(1, x);
  for (std::uint32_t k = 2; k <= 6; ++k) {
    std::uint64_t below = 0;
    for (std::uint32_t j = 1; j < k; ++j) below += agg.hist_max[j];
    CHECK(count_k_free_mobius(x, k).count == below);
    std::uint64_t at_least = 1;  // n = 1 sits in hist_min[1] but is k-full
    for (std::uint32_t j = k; j <= kMaxExponent; ++j) at_least += agg.hist_min[j];
    CHECK(count_k_full(x, k).count == at_least);
  }
}

TEST_CASE("enumeration yields each k-full number once with a valid signature") {
  std::set<std::uint64_t> seen;
  enumerate_k_full(100000, 2, [&](std::uint64_t v, const PrimeSignature& sig) {
    CHECK(seen.insert(v).second);
    CHECK(sig.n == v);
    CHECK(sig.value() == v);
    for (std::size_t i = 0; i < sig.factors.size(); ++i) {
      CHECK(sig.factors[i].exponent >= 2);
      if (i > 0) CHECK(sig.factors[i - 1].prime < sig.factors[i].prime);
    }
  });
  CHECK(seen.size() == count_k_full(100000, 2).count);
  CHECK(seen.count(1) == 1);
  CHECK(seen.count(72) == 1);   // 2^3 * 3^2
  CHECK(seen.count(12) == 0);   // 2^2 * 3 is not square-full
}

TEST_CASE("enumeration bound is inclusive") {
  std::set<std::uint64_t> seen;
  enumerate_k_full(64, 2, [&](std::uint64_t v, const PrimeSignature&) { seen.insert(v); });
  CHECK(seen.count(64) == 1);
  CHECK(seen == std::set<std::uint64_t>{1, 4, 8, 9, 16, 25, 27, 32, 36, 49, 64});
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(count_k_free_sieve(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(count_k_free_sieve(10, 1), std::invalid_argument);
  CHECK_THROWS_AS(count_k_free_mobius(10, 1), std::invalid_argument);
  CHECK_THROWS_AS(count_k_full(10, 0), std::invalid_argument);
}

TEST_CASE("large k behaves") {
  // 2^11 = 2048 is the smallest 11th power, so everything below is 11-free.
  CHECK(count_k_free_mobius(1000, 11).count == 1000);
  CHECK(count_k_free_mobius(2047, 11).count == 2047);
  CHECK(count_k_free_mobius(2048, 11).count == 2047);
  CHECK(count_k_full(1000, 11).count == 1);
  // 12-full up to 2^20: n = 1, 2^12..2^20, 3^12.
  CHECK(count_k_full(1 << 20, 12).count == 11);
  std::uint64_t slow = 0;
  for (std::uint64_t n = 1; n <= (1 << 20); ++n) {
    auto f = oracle::factor_map(n);
    bool ok = true;
    for (auto& [p, e] : f) ok = ok && e >= 12;
    if (ok) ++slow;
  }
  CHECK(count_k_full(1 << 20, 12).count == slow);
}
