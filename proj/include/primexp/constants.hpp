#pragma once

#include <cstdint>
#include <vector>

#include "primexp/factor.hpp"

namespace primexp {

enum class EstimateMethod {
  series,            // truncated series with analytic tail bound
  eta_acceleration,  // alternating series acceleration for zeta in (0,1)
  euler_product,     // product over primes, factored through zeta values
  direct_product,    // literal truncated product over primes
  prime_sum,         // truncated sum over primes
  enumeration,       // exhaustive enumeration with counting-function tail
  derived            // combination of other estimates
};

const char* estimate_method_name(EstimateMethod m);

// A numeric value together with a certified bound: |value - exact| <= error.
struct ConstantEstimate {
  double value = 0;
  double error = 0;
  EstimateMethod method = EstimateMethod::derived;
};

// Riemann zeta for real s in (0,1) or (1,inf). Certified to ~1e-13 or better;
// throws std::domain_error outside the supported range.
ConstantEstimate zeta(double s);

// Limit of the mean of the max exponent: 1 + sum_{k>=2} (1 - 1/zeta(k)).
ConstantEstimate max_exponent_mean_constant(double tol);
// Limit of the second moment: 1 + sum_{k>=2} (2k-1)(1 - 1/zeta(k)).
ConstantEstimate max_exponent_second_constant(double tol);
// Limit variance (second moment minus squared mean).
ConstantEstimate max_exponent_variance_constant(double tol);

// Coefficients of the min-exponent moment asymptotics. gamma0(k) multiplies
// x^{1/k} in the k-full counting function; gamma1(k) multiplies x^{1/(k+1)}.
// Both are evaluated by factoring the defining Euler product through zeta
// values, with a certified residual-product tail.
ConstantEstimate min_exponent_gamma0(std::uint32_t k, double tol);
ConstantEstimate min_exponent_gamma1(std::uint32_t k, double tol);

// Same gamma0 target from the literal product over primes <= prime_limit.
// The certified bound here decays only like a power of prime_limit, so it is
// loose; useful as an independent cross-check of the factored evaluation.
ConstantEstimate min_exponent_gamma0_direct(std::uint32_t k, std::uint64_t prime_limit);

// Mean of the limiting distribution of #{p : p^k || n}: sum_p (p-1)/p^{k+1}.
ConstantEstimate exponent_count_mean(std::uint32_t k, double tol);
// Second moment of the same distribution via prime sums.
ConstantEstimate exponent_count_second(std::uint32_t k, double tol);

// Limiting distribution of a 0/1-weighted count of prime exponents. e[m] is
// the density of integers whose weighted count equals m; the weights live on
// square-full support, so e[m] is an enumeration over square-full l <= limit
// with certified truncation bounds.
struct OmegaWeightGrid {
  ExponentSequence seq;
  std::uint64_t limit = 0;
  std::vector<double> e;  // e[m], truncated from below
  double bin_error = 0;      // per-bin certified truncation error
  double mass_deficit = 0;   // certified bound on 1 - sum(e)
  double mean = 0;           // sum_m m * e[m]
  double mean_error = 0;     // certified bound on the mean truncation
  std::uint64_t nodes = 0;   // enumeration size, for diagnostics
};

OmegaWeightGrid omega_weight_grid(const ExponentSequence& seq, double bin_tol);
OmegaWeightGrid omega_weight_grid_limit(const ExponentSequence& seq, std::uint64_t limit);

// Single entry e_{k,m} of the grid for the indicator sequence of k.
ConstantEstimate omega_weight(std::uint32_t k, std::uint32_t m, double tol);

}  // namespace primexp
