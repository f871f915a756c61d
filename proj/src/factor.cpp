#include "primexp/factor.hpp"

#include <charconv>
#include <stdexcept>

namespace primexp {

std::uint64_t PrimeSignature::value() const {
  std::uint64_t v = 1;
  for (const auto& f : factors)
    for (std::uint32_t i = 0; i < f.exponent; ++i) v *= f.prime;
  return v;
}

PrimeSignature factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  PrimeSignature sig;
  sig.n = n;
  std::uint64_t rest = n;
  auto strip = [&](std::uint64_t p) {
    if (rest % p != 0) return;
    std::uint32_t e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    sig.factors.push_back({p, e});
  };
  strip(2);
  strip(3);
  // Wheel over 6k +- 1.
  for (std::uint64_t p = 5; p * p <= rest; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (rest > 1) sig.factors.push_back({rest, 1});
  return sig;
}

ExponentSummary exponent_summary(const PrimeSignature& sig) {
  ExponentSummary s;
  s.n = sig.n;
  if (sig.factors.empty()) return s;  // n = 1, both extremes stay 1
  std::uint32_t lo = kMaxExponent + 1, hi = 0;
  for (const auto& f : sig.factors) {
    if (f.exponent < lo) lo = f.exponent;
    if (f.exponent > hi) hi = f.exponent;
    ++s.omega[f.exponent];
    ++s.distinct;
    s.total += f.exponent;
  }
  s.min_exponent = lo;
  s.max_exponent = hi;
  return s;
}

ExponentSummary exponent_summary(std::uint64_t n) { return exponent_summary(factorize(n)); }

ExponentSequence::ExponentSequence(Kind kind, std::uint32_t k, std::string name)
    : kind_(kind), k_(k), name_(std::move(name)) {}

ExponentSequence ExponentSequence::all() { return {Kind::all, 0, "S"}; }
ExponentSequence ExponentSequence::even() { return {Kind::even, 0, "E"}; }
ExponentSequence ExponentSequence::odd() { return {Kind::odd, 0, "O"}; }

ExponentSequence ExponentSequence::indicator(std::uint32_t k) {
  if (k < 2) throw std::invalid_argument("ExponentSequence::indicator: k must be >= 2");
  return {Kind::indicator, k, std::to_string(k)};
}

std::uint32_t ExponentSequence::coefficient(std::uint32_t j) const {
  if (j < 2) return 0;
  switch (kind_) {
    case Kind::all: return 1;
    case Kind::even: return (j % 2 == 0) ? 1 : 0;
    case Kind::odd: return (j % 2 == 1) ? 1 : 0;
    case Kind::indicator: return (j == k_) ? 1 : 0;
  }
  return 0;
}

std::uint32_t ExponentSequence::first_supported() const {
  switch (kind_) {
    case Kind::all: return 2;
    case Kind::even: return 2;
    case Kind::odd: return 3;
    case Kind::indicator: return k_;
  }
  return 2;
}

std::optional<ExponentSequence> ExponentSequence::parse(std::string_view text) {
  if (text == "S") return all();
  if (text == "E") return even();
  if (text == "O") return odd();
  std::uint32_t k = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
  if (ec == std::errc{} && ptr == text.data() + text.size() && k >= 2) return indicator(k);
  return std::nullopt;
}

std::uint64_t omega_a(const ExponentSummary& summary, const ExponentSequence& seq) {
  std::uint64_t total = 0;
  for (std::uint32_t j = 2; j <= kMaxExponent; ++j)
    if (summary.omega[j]) total += seq.coefficient(j) * summary.omega[j];
  return total;
}

std::uint64_t omega_a(std::uint64_t n, const ExponentSequence& seq) {
  return omega_a(exponent_summary(n), seq);
}

}  // namespace primexp
