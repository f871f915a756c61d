#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "primexp/constants.hpp"

namespace primexp {

// Certified majorant of the defect 1 - f(n), with closed-form tail sums.
class TailBound {
 public:
  enum class Kind { finite, geometric, power };

  // Defect vanishes for n >= support_end.
  static TailBound finite(std::uint64_t support_end);
  // Defect <= amp * ratio^n.
  static TailBound geometric(double amp, double ratio);
  // Defect <= amp * n^{-(2+eps)}.
  static TailBound power(double amp, double eps);

  double at(std::uint64_t n) const;
  // Certified upper bound for sum_{n > cutoff} (1 - f(n)).
  double sum_above(std::uint64_t cutoff) const;
  // Certified upper bound for sum_{n > cutoff} (2n - 1)(1 - f(n)).
  double weighted_sum_above(std::uint64_t cutoff) const;
  Kind kind() const { return kind_; }
  std::string describe() const;

 private:
  TailBound(Kind kind, std::uint64_t end, double amp, double second);
  Kind kind_;
  std::uint64_t end_ = 0;
  double amp_ = 0;
  double second_ = 0;  // ratio or eps
};

// Non-decreasing f with f(0) = 0 and f -> 1, the cumulative form of a
// discrete law on {0, 1, 2, ...} with pmf p_k = f(k+1) - f(k).
class ArithmeticF {
 public:
  ArithmeticF(std::string name, std::function<double(std::uint64_t)> eval, double eval_error,
              TailBound tail);
  // No tail certificate: pointwise use only, certified sums refuse.
  static ArithmeticF uncertified(std::string name, std::function<double(std::uint64_t)> eval);

  double operator()(std::uint64_t n) const { return clamp_eval(n); }
  const std::string& name() const { return name_; }
  double eval_error() const { return eval_error_; }
  bool certified() const { return certified_; }
  const TailBound& tail() const;  // throws std::domain_error if uncertified

 private:
  double clamp_eval(std::uint64_t n) const;
  std::string name_;
  std::function<double(std::uint64_t)> eval_;
  double eval_error_ = 0;
  bool certified_ = false;
  TailBound tail_;
};

// Named instances:
//   "degenerate"  point mass at zero
//   "f1"          f(n) = 1/zeta(n) for n >= 2, the max-exponent limit law
//   "f0:N"        f(n) = log n / log N capped at 1 (leading-digit law)
//   "f2k:K"       cumulative law of the count of primes with exponent K
//   "fA:S|E|O|K"  cumulative law of a 0/1-weighted exponent count
ArithmeticF builtin_f(std::string_view spec);

struct ValidationIssue {
  std::string check;
  std::uint64_t n = 0;
  double lhs = 0;
  double rhs = 0;
};
struct ValidationReport {
  bool tail_checked = false;
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Pointwise checks over [0, n_max]: vanishing at 0, monotonicity, upper
// bound 1, and consistency with the certified tail when present.
ValidationReport validate(const ArithmeticF& f, std::uint64_t n_max);

// D1 = sum_{k>=2} (1 - f(k)) and D2 = D1 + 2 sum_{k>=2} (k-1)(1 - f(k)),
// with certified truncation; throws std::domain_error when the certificate
// cannot reach tol (uncertified f, or eval error floor too high).
ConstantEstimate defect_sum_d1(const ArithmeticF& f, double tol);
ConstantEstimate defect_sum_d2(const ArithmeticF& f, double tol);

class ArithmeticDistribution {
 public:
  explicit ArithmeticDistribution(ArithmeticF f);

  const ArithmeticF& f() const { return f_; }
  double pmf(std::uint64_t k) const;
  double cdf(std::uint64_t k) const;

  // Closed forms via the defect sums: mean = 1 - f(1) + D1,
  // second moment = 1 - f(1) + D2.
  ConstantEstimate mean(double tol) const;
  ConstantEstimate second_moment(double tol) const;
  ConstantEstimate variance(double tol) const;

  // Truncated sum_k k p_k with a certified remainder from the tail bound.
  ConstantEstimate mean_direct(std::uint64_t cutoff) const;

  // Inverse-CDF draws; identical output for identical (seed, count).
  std::vector<std::uint64_t> sample(std::uint64_t seed, std::size_t count) const;

 private:
  ArithmeticF f_;
};

}  // namespace primexp
