#include "primexp/counting.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "primexp/int128.hpp"
#include "primexp/primes.hpp"

namespace primexp {

namespace {

void require_args(std::uint64_t x, std::uint32_t k, const char* who) {
  if (x < 1) throw std::invalid_argument(std::string(who) + ": x must be >= 1");
  if (k < 2 || k > kMaxExponent)
    throw std::invalid_argument(std::string(who) + ": k must be in [2, 63]");
}

// Largest r with r^k <= x.
std::uint64_t kth_root(std::uint64_t x, std::uint32_t k) {
  auto pow_fits = [&](std::uint64_t r) {
    uint128 v = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      v *= r;
      if (v > x) return false;
    }
    return true;
  };
  auto r = static_cast<std::uint64_t>(
      std::pow(static_cast<double>(x), 1.0 / static_cast<double>(k)));
  while (r > 1 && !pow_fits(r)) --r;
  while (pow_fits(r + 1)) ++r;
  return r;
}

uint128 ipow128(std::uint64_t base, std::uint32_t exp) {
  uint128 v = 1;
  for (std::uint32_t i = 0; i < exp; ++i) v *= base;
  return v;
}

template <class Visit>
void kfull_dfs(const std::vector<std::uint32_t>& primes, std::size_t i0, std::uint64_t val,
               std::uint64_t limit, std::uint32_t k, std::size_t depth, Visit&& visit) {
  for (std::size_t i = i0; i < primes.size(); ++i) {
    const std::uint64_t p = primes[i];
    const uint128 pk = ipow128(p, k);
    if (static_cast<uint128>(val) * pk > limit) break;
    std::uint64_t v = static_cast<std::uint64_t>(val * static_cast<std::uint64_t>(pk));
    std::uint32_t e = k;
    for (;;) {
      visit(depth, i, e, v);
      kfull_dfs(primes, i + 1, v, limit, k, depth + 1, visit);
      if (static_cast<uint128>(v) * p > limit) break;
      v *= p;
      ++e;
    }
  }
}

}  // namespace

const char* count_kind_name(CountKind k) {
  return k == CountKind::k_free ? "kfree" : "kfull";
}

const char* count_method_name(CountMethod m) {
  switch (m) {
    case CountMethod::sieve: return "sieve";
    case CountMethod::mobius_formula: return "moebius";
    case CountMethod::enumeration: return "enumeration";
  }
  return "unknown";
}

CountReport count_k_free_sieve(std::uint64_t x, std::uint32_t k) {
  require_args(x, k, "count_k_free_sieve");
  if (x > (std::uint64_t{1} << 32))
    throw std::invalid_argument("count_k_free_sieve: x too large for the direct sieve");
  // One bit per n in [1, x]; set = divisible by some p^k.
  std::vector<std::uint64_t> marked((x >> 6) + 1, 0);
  const auto root = static_cast<std::uint32_t>(kth_root(x, k));
  for (const std::uint32_t p : primes_up_to(root)) {
    const auto q = static_cast<std::uint64_t>(ipow128(p, k));
    for (std::uint64_t m = q; m <= x; m += q) marked[(m - 1) >> 6] |= std::uint64_t{1} << ((m - 1) & 63);
  }
  std::uint64_t bad = 0;
  for (const std::uint64_t w : marked) bad += static_cast<std::uint64_t>(__builtin_popcountll(w));
  return {x, k, CountKind::k_free, CountMethod::sieve, x - bad};
}

CountReport count_k_free_mobius(std::uint64_t x, std::uint32_t k) {
  require_args(x, k, "count_k_free_mobius");
  const std::uint64_t root = kth_root(x, k);
  const auto mu = mobius_up_to(root);
  std::int64_t total = 0;
  for (std::uint64_t d = 1; d <= root; ++d) {
    if (mu[d] == 0) continue;
    const auto dk = static_cast<std::uint64_t>(ipow128(d, k));
    total += static_cast<std::int64_t>(mu[d]) * static_cast<std::int64_t>(x / dk);
  }
  return {x, k, CountKind::k_free, CountMethod::mobius_formula, static_cast<std::uint64_t>(total)};
}

CountReport count_k_full(std::uint64_t x, std::uint32_t k) {
  require_args(x, k, "count_k_full");
  const auto primes = primes_up_to(static_cast<std::uint32_t>(kth_root(x, k)));
  std::uint64_t count = 1;  // n = 1
  kfull_dfs(primes, 0, 1, x, k, 0,
            [&](std::size_t, std::size_t, std::uint32_t, std::uint64_t) { ++count; });
  return {x, k, CountKind::k_full, CountMethod::enumeration, count};
}

void enumerate_k_full(std::uint64_t limit, std::uint32_t k,
                      const std::function<void(std::uint64_t, const PrimeSignature&)>& fn) {
  require_args(limit, k, "enumerate_k_full");
  const auto primes = primes_up_to(static_cast<std::uint32_t>(kth_root(limit, k)));
  PrimeSignature sig;
  sig.n = 1;
  fn(1, sig);
  kfull_dfs(primes, 0, 1, limit, k, 0,
            [&](std::size_t depth, std::size_t i, std::uint32_t e, std::uint64_t v) {
              sig.factors.resize(depth);
              sig.factors.push_back({primes[i], e});
              sig.n = v;
              fn(v, sig);
            });
}

}  // namespace primexp
