#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "primexp/factor.hpp"

using namespace primexp;

TEST_CASE("factorize small values") {
  auto s = factorize(360);  // 2^3 * 3^2 * 5
  REQUIRE(s.factors.size() == 3);
  CHECK(s.factors[0] == PrimeFactor{2, 3});
  CHECK(s.factors[1] == PrimeFactor{3, 2});
  CHECK(s.factors[2] == PrimeFactor{5, 1});
  CHECK(s.value() == 360);

  CHECK(factorize(1).factors.empty());
  CHECK(factorize(2).factors.size() == 1);
  CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorize agrees with oracle on a range") {
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    auto sig = factorize(n);
    auto ref = oracle::factor_map(n);
    REQUIRE(sig.factors.size() == ref.size());
    std::size_t i = 0;
    for (auto& [p, e] : ref) {
      CHECK(sig.factors[i].prime == p);
      CHECK(sig.factors[i].exponent == e);
      ++i;
    }
    CHECK(sig.value() == n);
  }
}

TEST_CASE("factorize near 2^53") {
  // A prime just below 2^53; cross-checked with deterministic Miller-Rabin.
  const std::uint64_t p = 9007199254740881ull;
  REQUIRE(oracle::miller_rabin(p));
  auto sig = factorize(2 * p);
  REQUIRE(sig.factors.size() == 2);
  CHECK(sig.factors[0] == PrimeFactor{2, 1});
  CHECK(sig.factors[1] == PrimeFactor{p, 1});
}

TEST_CASE("summary extremes and counts") {
  auto s = exponent_summary(1944);  // 2^3 * 3^5
  CHECK(s.max_exponent == 5);
  CHECK(s.min_exponent == 3);
  CHECK(s.distinct == 2);
  CHECK(s.total == 8);
  CHECK(s.omega[3] == 1);
  CHECK(s.omega[5] == 1);
  CHECK(s.omega[2] == 0);

  auto one = exponent_summary(1);
  CHECK(one.max_exponent == 1);
  CHECK(one.min_exponent == 1);
  CHECK(one.distinct == 0);
  CHECK(one.total == 0);

  auto p64 = exponent_summary(std::uint64_t{1} << 62);
  CHECK(p64.max_exponent == 62);
  CHECK(p64.min_exponent == 62);
}

TEST_CASE("summary against oracle") {
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    auto s = exponent_summary(n);
    CHECK(s.max_exponent == oracle::max_exp_slow(n));
    CHECK(s.min_exponent == oracle::min_exp_slow(n));
    for (std::uint32_t k = 1; k <= 12; ++k) CHECK(s.omega[k] == oracle::omega_k_slow(n, k));
  }
}

TEST_CASE("sequence coefficients") {
  auto S = ExponentSequence::all();
  auto E = ExponentSequence::even();
  auto O = ExponentSequence::odd();
  auto I3 = ExponentSequence::indicator(3);
  CHECK(S.coefficient(1) == 0);  // j starts at 2
  CHECK(S.coefficient(2) == 1);
  CHECK(S.coefficient(7) == 1);
  CHECK(E.coefficient(2) == 1);
  CHECK(E.coefficient(3) == 0);
  CHECK(O.coefficient(2) == 0);
  CHECK(O.coefficient(3) == 1);
  CHECK(O.coefficient(5) == 1);
  CHECK(I3.coefficient(2) == 0);
  CHECK(I3.coefficient(3) == 1);
  CHECK(I3.coefficient(4) == 0);
  CHECK(S.first_supported() == 2);
  CHECK(E.first_supported() == 2);
  CHECK(O.first_supported() == 3);
  CHECK(I3.first_supported() == 3);
  CHECK_THROWS_AS(ExponentSequence::indicator(1), std::invalid_argument);
}

TEST_CASE("sequence parsing") {
  CHECK(ExponentSequence::parse("S") == ExponentSequence::all());
  CHECK(ExponentSequence::parse("E") == ExponentSequence::even());
  CHECK(ExponentSequence::parse("O") == ExponentSequence::odd());
  CHECK(ExponentSequence::parse("4") == ExponentSequence::indicator(4));
  CHECK(!ExponentSequence::parse("1"));
  CHECK(!ExponentSequence::parse("x"));
  CHECK(!ExponentSequence::parse(""));
}

TEST_CASE("weighted omega examples") {
  auto S = ExponentSequence::all();
  // 12 = 2^2 * 3: one prime with exponent >= 2.
  CHECK(omega_a(12, S) == 1);
  // 8 = 2^3: still one such prime (weights are 0/1, not j-dependent).
  CHECK(omega_a(8, S) == 1);
  CHECK(omega_a(720, ExponentSequence::even()) == 2);   // 2^4 * 3^2 * 5
  CHECK(omega_a(720, ExponentSequence::odd()) == 0);
  CHECK(omega_a(1944, ExponentSequence::odd()) == 2);   // 2^3 * 3^5
  CHECK(omega_a(100, ExponentSequence::indicator(2)) == 2);
  CHECK(omega_a(1, S) == 0);
}

TEST_CASE("omega identities over a range") {
  auto S = ExponentSequence::all();
  auto E = ExponentSequence::even();
  auto O = ExponentSequence::odd();
  for (std::uint64_t n = 1; n <= 4000; ++n) {
    auto s = exponent_summary(n);
    std::uint64_t sum_k = 0, sum_weighted = 0;
    for (std::uint32_t k = 1; k <= kMaxExponent; ++k) {
      sum_k += s.omega[k];
      sum_weighted += std::uint64_t{k} * s.omega[k];
    }
    CHECK(sum_k == s.distinct);
    CHECK(sum_weighted == s.total);
    // S counts distinct primes whose exponent is at least 2.
    CHECK(omega_a(s, S) == std::uint64_t{s.distinct} - s.omega[1]);
    // E and O partition the exponents >= 2 by parity.
    CHECK(omega_a(s, E) + omega_a(s, O) == omega_a(s, S));
    // Indicator sequences recover the raw counts.
    for (std::uint32_t k = 2; k <= 6; ++k)
      CHECK(omega_a(s, ExponentSequence::indicator(k)) == s.omega[k]);
  }
}
