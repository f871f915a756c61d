#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace primexp {

// Highest exponent we can ever see for n < 2^64.
inline constexpr std::uint32_t kMaxExponent = 63;

struct PrimeFactor {
  std::uint64_t prime = 0;
  std::uint32_t exponent = 0;
  friend bool operator==(const PrimeFactor&, const PrimeFactor&) = default;
};

// Factorization of n with primes strictly increasing. n = 1 has no factors.
struct PrimeSignature {
  std::uint64_t n = 0;
  std::vector<PrimeFactor> factors;

  std::uint64_t value() const;  // recomputed product, for consistency checks
  friend bool operator==(const PrimeSignature&, const PrimeSignature&) = default;
};

// Trial division; fine for n up to ~1e14 or so at oracle scale.
PrimeSignature factorize(std::uint64_t n);

// Exponent statistics of one n. Convention: for n = 1 both extremes are 1
// and every omega count is zero.
struct ExponentSummary {
  std::uint64_t n = 0;
  std::uint32_t max_exponent = 1;
  std::uint32_t min_exponent = 1;
  std::uint32_t distinct = 0;  // number of distinct primes
  std::uint64_t total = 0;     // number of primes with multiplicity
  // omega[k] = number of primes dividing n with exponent exactly k.
  std::array<std::uint16_t, kMaxExponent + 1> omega{};
};

ExponentSummary exponent_summary(const PrimeSignature& sig);
ExponentSummary exponent_summary(std::uint64_t n);

// 0/1 coefficient sequence (a_j) over exponents j >= 2, used to weight
// omega counts: omega_a(n) = sum_{j>=2} a_j * omega[j].
class ExponentSequence {
 public:
  enum class Kind { all, even, odd, indicator };

  static ExponentSequence all();                        // a_j = 1 for all j >= 2
  static ExponentSequence even();                       // a_j = [j even]
  static ExponentSequence odd();                        // a_j = [j odd], so j >= 3
  static ExponentSequence indicator(std::uint32_t k);   // a_j = [j == k], k >= 2

  std::uint32_t coefficient(std::uint32_t j) const;     // 0 for j < 2
  // Smallest j >= 2 with a_j = 1. Drives tail estimates elsewhere.
  std::uint32_t first_supported() const;
  Kind kind() const { return kind_; }
  std::uint32_t parameter() const { return k_; }
  const std::string& name() const { return name_; }

  // Accepts "S", "E", "O" or a decimal k >= 2.
  static std::optional<ExponentSequence> parse(std::string_view text);

  friend bool operator==(const ExponentSequence&, const ExponentSequence&) = default;

 private:
  ExponentSequence(Kind kind, std::uint32_t k, std::string name);
  Kind kind_;
  std::uint32_t k_;
  std::string name_;
};

std::uint64_t omega_a(const ExponentSummary& summary, const ExponentSequence& seq);
std::uint64_t omega_a(std::uint64_t n, const ExponentSequence& seq);

}  // namespace primexp
