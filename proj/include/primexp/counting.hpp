#pragma once

#include <cstdint>
#include <functional>

#include "primexp/factor.hpp"

namespace primexp {

enum class CountKind { k_free, k_full };
enum class CountMethod { sieve, mobius_formula, enumeration };

const char* count_kind_name(CountKind k);
const char* count_method_name(CountMethod m);

struct CountReport {
  std::uint64_t x = 0;
  std::uint32_t k = 0;
  CountKind kind = CountKind::k_free;
  CountMethod method = CountMethod::sieve;
  std::uint64_t count = 0;
};

// k-free: every prime exponent is strictly below k (n = 1 included).
// Both methods are exact; the sieve marks multiples of p^k, the other
// evaluates the classical Mobius divisor sum. k >= 2, x >= 1.
CountReport count_k_free_sieve(std::uint64_t x, std::uint32_t k);
CountReport count_k_free_mobius(std::uint64_t x, std::uint32_t k);

// k-full: every prime exponent is at least k (n = 1 included). Exact
// enumeration over the sparse support. k >= 2, x >= 1.
CountReport count_k_full(std::uint64_t x, std::uint32_t k);

// Visits every k-full n <= limit once (ordering follows the enumeration,
// not increasing n) with its full signature.
void enumerate_k_full(std::uint64_t limit, std::uint32_t k,
                      const std::function<void(std::uint64_t, const PrimeSignature&)>& fn);

}  // namespace primexp
