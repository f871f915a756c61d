#include "primexp/primes.hpp"

#include <cstring>
#include <stdexcept>

namespace primexp {

PrimeSieve::PrimeSieve(std::uint64_t limit) : limit_(limit) {
  bits_.assign(limit / 64 + 1, ~std::uint64_t{0});
  auto clear = [&](std::uint64_t n) { bits_[n >> 6] &= ~(std::uint64_t{1} << (n & 63)); };
  clear(0);
  if (limit >= 1) clear(1);
  for (std::uint64_t p = 2; p * p <= limit; ++p) {
    if (!is_prime(p)) continue;
    for (std::uint64_t m = p * p; m <= limit; m += p) clear(m);
  }
  // Mask out bits beyond limit in the last word so count() is exact.
  std::uint64_t used = (limit & 63) + 1;
  if (used < 64) bits_.back() &= (std::uint64_t{1} << used) - 1;
}

std::uint64_t PrimeSieve::count() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : bits_) total += static_cast<std::uint64_t>(__builtin_popcountll(w));
  return total;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  PrimeSieve sieve(limit);
  std::vector<std::uint32_t> out;
  if (limit >= 2) out.reserve(static_cast<std::size_t>(sieve.count()));
  for (std::uint64_t n = 2; n <= limit; ++n)
    if (sieve.is_prime(n)) out.push_back(static_cast<std::uint32_t>(n));
  return out;
}

std::vector<std::int8_t> mobius_up_to(std::uint64_t limit) {
  // Linear sieve: track smallest prime factor implicitly.
  std::vector<std::int8_t> mu(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  std::vector<std::uint32_t> spf(limit + 1, 0);
  if (limit >= 1) mu[1] = 1;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (spf[n] == 0) {
      spf[n] = static_cast<std::uint32_t>(n);
      mu[n] = -1;
      primes.push_back(static_cast<std::uint32_t>(n));
    }
    for (std::uint32_t p : primes) {
      if (p > spf[n] || p * n > limit) break;
      spf[p * n] = p;
      mu[p * n] = (p == spf[n]) ? 0 : static_cast<std::int8_t>(-mu[n]);
    }
  }
  return mu;
}

}  // namespace primexp
