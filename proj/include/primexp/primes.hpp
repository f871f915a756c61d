#pragma once

#include <cstdint>
#include <vector>

namespace primexp {

// Bit-packed sieve of Eratosthenes over [0, limit].
class PrimeSieve {
 public:
  explicit PrimeSieve(std::uint64_t limit);

  bool is_prime(std::uint64_t n) const {
    if (n > limit_) return false;
    return (bits_[n >> 6] >> (n & 63)) & 1u;
  }
  std::uint64_t limit() const { return limit_; }

  std::uint64_t count() const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> bits_;
};

// All primes <= limit, increasing. limit must fit the uint32 range.
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

// mu[0] unused, mu[n] = Moebius function for 1 <= n <= limit.
std::vector<std::int8_t> mobius_up_to(std::uint64_t limit);

}  // namespace primexp
