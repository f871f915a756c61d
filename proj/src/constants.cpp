#include "primexp/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "primexp/int128.hpp"
#include "primexp/primes.hpp"

namespace primexp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// zeta via Euler-Maclaurin for real s > 1: N-term partial sum plus Bernoulli
// corrections through B12. For real positive s the remainder is bounded in
// magnitude by the first omitted correction (the B14 term), which we compute
// and charge.
ConstantEstimate zeta_em(double s) {
  constexpr double N = 64.0;
  static const double bern[7] = {1.0 / 6,  -1.0 / 30,     1.0 / 42, -1.0 / 30,
                                 5.0 / 66, -691.0 / 2730, 7.0 / 6};
  double sum = 0;
  for (int n = 63; n >= 2; --n) sum += std::pow(static_cast<double>(n), -s);
  sum += 1.0;
  sum += 0.5 * std::pow(N, -s);
  sum += std::pow(N, 1.0 - s) / (s - 1.0);
  double poch = 1.0;       // (s)(s+1)...(s+2j-2)
  double factorial = 1.0;  // (2j)!
  double term = 0.0;
  int i = 0;
  for (int j = 1; j <= 7; ++j) {
    while (i < 2 * j - 1) {
      poch *= s + i;
      ++i;
    }
    factorial *= (2.0 * j - 1.0) * (2.0 * j);
    term = bern[j - 1] / factorial * poch * std::pow(N, -s - (2.0 * j - 1.0));
    if (j <= 6) sum += term;
  }
  const double trunc = std::fabs(term);
  const double round = 80.0 * kEps * (std::fabs(sum) + 2.0);
  return {sum, trunc + round, EstimateMethod::series};
}

// zeta on (0,1) through the alternating series eta(s) = sum (-1)^k (k+1)^{-s},
// accelerated by the Chebyshev-polynomial scheme of Cohen, Rodriguez Villegas
// and Zagier. The coefficients (k+1)^{-s} are moments of a positive measure,
// so the accelerated sum converges like (3+sqrt 8)^{-n}; we charge eight
// times that plus rounding.
ConstantEstimate zeta_eta(double s) {
  constexpr int n = 64;
  const double base = 3.0 + std::sqrt(8.0);
  double d = std::pow(base, n);
  d = (d + 1.0 / d) / 2.0;
  double b = -1.0;
  double c = -d;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    sum += c * std::pow(static_cast<double>(k + 1), -s);
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  const double eta = sum / d;
  const double eta_err = 8.0 * std::pow(base, -n) + 4.0 * n * kEps;
  const double den = 1.0 - std::pow(2.0, 1.0 - s);
  const double z = eta / den;
  const double den_err = 4.0 * kEps * std::pow(2.0, 1.0 - s);
  const double err =
      (eta_err + std::fabs(z) * den_err) / std::fabs(den) + 4.0 * kEps * std::fabs(z);
  return {z, err, EstimateMethod::eta_acceleration};
}

void require_positive_tol(double tol, const char* who) {
  if (!(tol > 0) || !std::isfinite(tol))
    throw std::invalid_argument(std::string(who) + ": tol must be positive");
}

// ---------- factored Euler products ----------
//
// For a polynomial F with F(0) = 1 we evaluate prod_p F(p^{-1/d}) by writing
// F(y) * prod_j (1 - y^j)^{a_j} = 1 + O(y^{T+1}) with integer a_j, so that
//
//   prod_p F(p^{-1/d}) = prod_j zeta(j/d)^{a_j} * prod_p R(p^{-1/d}),
//
// where R(y) = F(y) prod_j (1 - y^j)^{a_j} has no terms below y^{T+1}. The
// residual product over p <= P is evaluated literally; for p > P a Cauchy
// estimate on |y| = 1/2 bounds the coefficients of R and hence the tail.

using Poly = std::vector<__int128>;

std::vector<long long> decompose(Poly f, int T) {
  f.resize(T + 1, 0);
  if (f[0] != 1) throw std::logic_error("decompose: F(0) != 1");
  std::vector<long long> a(T + 1, 0);
  for (int j = 1; j <= T; ++j) {
    const auto c = static_cast<long long>(f[j]);
    a[j] = c;
    if (c == 0) continue;
    if (c > 0) {
      for (long long rep = 0; rep < c; ++rep)
        for (int t = T; t >= j; --t) f[t] -= f[t - j];
    } else {
      for (long long rep = 0; rep < -c; ++rep)
        for (int t = j; t <= T; ++t) f[t] += f[t - j];
    }
  }
  for (int t = 1; t <= T; ++t)
    if (f[t] != 0) throw std::logic_error("decompose: residual not cleared");
  return a;
}

// Sup bound of |R(y)| on |y| = 1/2 via the triangle inequality.
double residual_sup_bound(const Poly& f, const std::vector<long long>& a) {
  double m = 0.0;
  for (std::size_t t = 0; t < f.size(); ++t) {
    const double c = static_cast<double>(static_cast<long long>(f[t]));
    m += std::fabs(c) * std::pow(0.5, static_cast<double>(t));
  }
  for (std::size_t j = 1; j < a.size(); ++j) {
    if (a[j] == 0) continue;
    if (a[j] > 0)
      m *= std::pow(1.0 + std::pow(0.5, static_cast<double>(j)), static_cast<double>(a[j]));
    else
      m *= std::pow(1.0 - std::pow(0.5, static_cast<double>(j)), static_cast<double>(a[j]));
  }
  return m;
}

double eval_poly_sparse(const Poly& f, double y) {
  double v = 0.0;
  double yp = 1.0;
  for (std::size_t t = 0; t < f.size(); ++t) {
    if (f[t] != 0) v += static_cast<double>(static_cast<long long>(f[t])) * yp;
    yp *= y;
  }
  return v;
}

// extra_zeta: optional prefactor zeta(num/den) applied to the product (used
// for the gamma1 family, where num/den < 1 and the factor is negative).
ConstantEstimate euler_product_factored(const Poly& f, int d, double tol, bool with_front_zeta,
                                        int front_num) {
  const int T = 6 * d + 6;
  const auto a = decompose(f, T);
  for (int j = 1; j <= d && j < static_cast<int>(a.size()); ++j)
    if (a[j] != 0) throw std::logic_error("euler_product_factored: zeta argument <= 1");

  double log_abs = 0.0;
  double log_err = 0.0;
  double sign = 1.0;
  int n_factors = 0;
  for (int j = d + 1; j <= T; ++j) {
    if (a[j] == 0) continue;
    ++n_factors;
    const auto z = zeta_em(static_cast<double>(j) / d);
    log_abs += a[j] * std::log(z.value);
    log_err += std::fabs(static_cast<double>(a[j])) *
               (z.error / z.value * 1.01 + 2.0 * kEps * (1.0 + std::fabs(std::log(z.value))));
  }
  if (with_front_zeta) {
    const auto z = zeta_eta(static_cast<double>(front_num) / d);
    if (z.value < 0) sign = -sign;
    log_abs += std::log(std::fabs(z.value));
    log_err += z.error / std::fabs(z.value) * 1.01 + 2.0 * kEps;
  }

  const double m_sup = residual_sup_bound(f, a);
  std::uint32_t prime_limit = 0;
  double tail = 0.0;
  for (std::uint32_t cand : {1000u, 10000u, 100000u, 1000000u, 10000000u}) {
    if (std::pow(4.0, d) > cand) continue;  // need p^{-1/d} <= 1/4 past the cutoff
    tail = std::pow(2.0, T + 4.0) * m_sup *
           std::pow(static_cast<double>(cand), -(static_cast<double>(T + 1 - d) / d));
    prime_limit = cand;
    if (tail <= tol / 3.0) break;
  }
  if (prime_limit == 0) throw std::logic_error("euler_product_factored: no usable prime cutoff");
  // Validity of the log expansion at the cutoff.
  const double edge = 2.0 * m_sup *
                      std::pow(2.0 * std::pow(static_cast<double>(prime_limit), -1.0 / d),
                               static_cast<double>(T + 1));
  if (!(edge <= 0.5)) throw std::logic_error("euler_product_factored: tail expansion invalid");

  const auto primes = primes_up_to(prime_limit);
  double log_res = 0.0;
  for (const std::uint32_t p : primes) {
    const double y = std::pow(static_cast<double>(p), -1.0 / d);
    double r = eval_poly_sparse(f, y);
    double yp = y;
    for (int j = 1; j <= T; ++j) {
      if (a[j] != 0) r *= std::pow(1.0 - yp, static_cast<double>(a[j]));
      yp *= y;
    }
    if (!(r > 0)) throw std::logic_error("euler_product_factored: nonpositive residual factor");
    log_res += std::log(r);
  }
  const double per_prime_round = (3.0 * T + 6.0 * n_factors + 20.0) * kEps;
  const double total_log_err =
      log_err + tail + static_cast<double>(primes.size()) * per_prime_round;

  const double value = sign * std::exp(log_abs + log_res);
  const double err =
      std::fabs(value) * std::expm1(total_log_err) * 1.05 + 4.0 * kEps * std::fabs(value);
  return {value, err, EstimateMethod::euler_product};
}

Poly gamma0_poly(std::uint32_t k) {
  Poly f(2 * k, 0);
  f[0] = 1;
  for (std::uint32_t m = k + 1; m <= 2 * k - 1; ++m) f[m] = 1;
  return f;
}

Poly gamma1_poly(std::uint32_t k) {
  Poly f(3 * k + 1, 0);
  f[0] = 1;
  for (std::uint32_t m = k + 2; m <= 2 * k - 1; ++m) f[m] = 1;
  for (std::uint32_t m = 2 * k + 2; m <= 3 * k; ++m) f[m] = -1;
  return f;
}

void require_k(std::uint32_t k, const char* who) {
  if (k < 2 || k > 24) throw std::invalid_argument(std::string(who) + ": k must be in [2, 24]");
}

// Sum over primes p > P of p^{-s} for s > 1, certified.
double prime_power_tail(double P, double s) {
  return std::pow(P, 1.0 - s) / (s - 1.0) + std::pow(P, -s);
}

double prime_zeta_fixed(double s, std::uint32_t limit, double* err_out) {
  const auto primes = primes_up_to(limit);
  double sum = 0.0;
  for (auto it = primes.rbegin(); it != primes.rend(); ++it)
    sum += std::pow(static_cast<double>(*it), -s);
  *err_out = prime_power_tail(static_cast<double>(limit), s) +
             static_cast<double>(primes.size() + 4) * kEps * (sum + 1.0);
  return sum;
}

}  // namespace

const char* estimate_method_name(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::series: return "series";
    case EstimateMethod::eta_acceleration: return "eta_acceleration";
    case EstimateMethod::euler_product: return "euler_product";
    case EstimateMethod::direct_product: return "direct_product";
    case EstimateMethod::prime_sum: return "prime_sum";
    case EstimateMethod::enumeration: return "enumeration";
    case EstimateMethod::derived: return "derived";
  }
  return "unknown";
}

ConstantEstimate zeta(double s) {
  if (!std::isfinite(s) || s <= 0.0 || s == 1.0)
    throw std::domain_error("zeta: s must be in (0,1) or (1,inf)");
  return s > 1.0 ? zeta_em(s) : zeta_eta(s);
}

ConstantEstimate max_exponent_mean_constant(double tol) {
  require_positive_tol(tol, "max_exponent_mean_constant");
  int K = 8;
  while (3.0 * std::pow(2.0, -static_cast<double>(K)) > tol / 2.0 && K < 4000) ++K;
  double sum = 1.0;
  double evals = 0.0;
  for (int k = K; k >= 2; --k) {
    const auto z = zeta_em(static_cast<double>(k));
    sum += 1.0 - 1.0 / z.value;
    evals += z.error / (z.value * z.value) * 1.01;
  }
  const double tail = 3.0 * std::pow(2.0, -static_cast<double>(K));
  const double err = tail + evals + 4.0 * kEps * (K + 2.0);
  return {sum, err, EstimateMethod::series};
}

ConstantEstimate max_exponent_second_constant(double tol) {
  require_positive_tol(tol, "max_exponent_second_constant");
  int K = 8;
  while (3.0 * (2.0 * K + 3.0) * std::pow(2.0, -static_cast<double>(K)) > tol / 2.0 && K < 4000)
    ++K;
  double sum = 1.0;
  double evals = 0.0;
  for (int k = K; k >= 2; --k) {
    const auto z = zeta_em(static_cast<double>(k));
    sum += (2.0 * k - 1.0) * (1.0 - 1.0 / z.value);
    evals += (2.0 * k - 1.0) * z.error / (z.value * z.value) * 1.01;
  }
  const double tail = 3.0 * (2.0 * K + 3.0) * std::pow(2.0, -static_cast<double>(K));
  const double err = tail + evals + 8.0 * kEps * (K + 2.0);
  return {sum, err, EstimateMethod::series};
}

ConstantEstimate max_exponent_variance_constant(double tol) {
  require_positive_tol(tol, "max_exponent_variance_constant");
  const auto b1 = max_exponent_mean_constant(tol / 8.0);
  const auto b2 = max_exponent_second_constant(tol / 2.0);
  const double value = b2.value - b1.value * b1.value;
  const double err = b2.error + b1.error * (2.0 * b1.value + b1.error) +
                     8.0 * kEps * (std::fabs(b2.value) + b1.value * b1.value);
  return {value, err, EstimateMethod::derived};
}

ConstantEstimate min_exponent_gamma0(std::uint32_t k, double tol) {
  require_k(k, "min_exponent_gamma0");
  require_positive_tol(tol, "min_exponent_gamma0");
  return euler_product_factored(gamma0_poly(k), static_cast<int>(k), tol, false, 0);
}

ConstantEstimate min_exponent_gamma1(std::uint32_t k, double tol) {
  require_k(k, "min_exponent_gamma1");
  require_positive_tol(tol, "min_exponent_gamma1");
  return euler_product_factored(gamma1_poly(k), static_cast<int>(k) + 1, tol, true,
                                static_cast<int>(k));
}

ConstantEstimate min_exponent_gamma0_direct(std::uint32_t k, std::uint64_t prime_limit) {
  require_k(k, "min_exponent_gamma0_direct");
  if (prime_limit < 10 || prime_limit > (std::uint64_t{1} << 31))
    throw std::invalid_argument("min_exponent_gamma0_direct: prime_limit out of range");
  const auto primes = primes_up_to(static_cast<std::uint32_t>(prime_limit));
  double log_sum = 0.0;
  for (const std::uint32_t p : primes) {
    double u = 0.0;
    for (std::uint32_t m = k + 1; m <= 2 * k - 1; ++m)
      u += std::pow(static_cast<double>(p), -(static_cast<double>(m) / k));
    log_sum += std::log1p(u);
  }
  const double P = static_cast<double>(prime_limit);
  // log(1+u) <= u termwise; each exponent m/k is >= (k+1)/k.
  double tail = 0.0;
  for (std::uint32_t m = k + 1; m <= 2 * k - 1; ++m)
    tail += prime_power_tail(P, static_cast<double>(m) / k);
  const double rounding = static_cast<double>(primes.size()) * 30.0 * kEps;
  const double value = std::exp(log_sum);
  const double err = value * std::expm1(tail + rounding) * 1.05 + 4.0 * kEps * value;
  return {value, err, EstimateMethod::direct_product};
}

ConstantEstimate exponent_count_mean(std::uint32_t k, double tol) {
  require_k(k, "exponent_count_mean");
  require_positive_tol(tol, "exponent_count_mean");
  std::uint32_t limit = 0;
  double tail = 0.0;
  for (std::uint32_t cand : {10000u, 100000u, 1000000u, 10000000u, 100000000u}) {
    tail = prime_power_tail(static_cast<double>(cand), static_cast<double>(k));
    limit = cand;
    if (tail <= tol / 2.0) break;
  }
  const PrimeSieve sieve(limit);
  double sum = 0.0;
  std::uint64_t n_primes = 0;
  for (std::uint64_t p = limit; p >= 2; --p) {
    if (!sieve.is_prime(p)) continue;
    ++n_primes;
    const double pd = static_cast<double>(p);
    sum += (pd - 1.0) * std::pow(pd, -static_cast<double>(k + 1));
  }
  const double rounding = static_cast<double>(n_primes + 4) * kEps * (sum + 1.0) * 4.0;
  return {sum, tail + rounding, EstimateMethod::prime_sum};
}

ConstantEstimate exponent_count_second(std::uint32_t k, double tol) {
  require_k(k, "exponent_count_second");
  require_positive_tol(tol, "exponent_count_second");
  const auto mu1 = exponent_count_mean(k, tol / 4.0);
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  const double s1 = prime_zeta_fixed(2.0 * k, 100000, &e1);
  const double s2 = prime_zeta_fixed(2.0 * k + 1.0, 100000, &e2);
  const double s3 = prime_zeta_fixed(2.0 * k + 2.0, 100000, &e3);
  const double value = mu1.value * (mu1.value + 1.0) - s1 + 2.0 * s2 - s3;
  const double err = mu1.error * (2.0 * mu1.value + 1.0 + mu1.error) + e1 + 2.0 * e2 + e3 +
                     8.0 * kEps * (std::fabs(value) + 1.0);
  return {value, err, EstimateMethod::derived};
}

// ---------- weighted omega distribution over square-full support ----------

namespace {

struct GridDfs {
  const std::vector<std::uint32_t>* primes = nullptr;
  std::uint64_t limit = 0;
  std::array<std::uint8_t, kMaxExponent + 1> coeff{};
  std::array<double, 64> bins{};
  std::array<double, 64> carry{};  // Kahan compensation
  std::uint64_t nodes = 0;

  void add(std::uint32_t bin, double x) {
    const double y = x - carry[bin];
    const double t = bins[bin] + y;
    carry[bin] = (t - bins[bin]) - y;
    bins[bin] = t;
  }

  void run(std::size_t i0, std::uint64_t val, double fac, std::uint32_t bin) {
    const auto& ps = *primes;
    for (std::size_t i = i0; i < ps.size(); ++i) {
      const std::uint64_t p = ps[i];
      if (static_cast<uint128>(val) * p * p > limit) break;
      const double fac2 = fac * (static_cast<double>(p) / (static_cast<double>(p) + 1.0));
      std::uint64_t v = val * p * p;
      std::uint32_t e = 2;
      for (;;) {
        const std::uint32_t b2 = bin + coeff[std::min(e, kMaxExponent)];
        add(b2, fac2 / static_cast<double>(v));
        ++nodes;
        run(i + 1, v, fac2, b2);
        if (static_cast<uint128>(v) * p > limit) break;
        v *= p;
        ++e;
      }
    }
  }
};

std::uint32_t isqrt_u64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return static_cast<std::uint32_t>(r);
}

}  // namespace

OmegaWeightGrid omega_weight_grid_limit(const ExponentSequence& seq, std::uint64_t limit) {
  if (limit < 4 || limit > std::uint64_t{100000000000000000ull})
    throw std::invalid_argument("omega_weight_grid_limit: limit must be in [4, 1e17]");
  const double six_over_pi2 = 6.0 / (M_PI * M_PI);
  const auto primes = primes_up_to(isqrt_u64(limit));

  GridDfs dfs;
  dfs.primes = &primes;
  dfs.limit = limit;
  for (std::uint32_t e = 0; e <= kMaxExponent; ++e)
    dfs.coeff[e] = static_cast<std::uint8_t>(seq.coefficient(e));
  dfs.add(0, 1.0);  // l = 1
  dfs.nodes = 1;
  dfs.run(0, 1, 1.0, 0);

  OmegaWeightGrid g{seq, limit, {}, 0, 0, 0, 0, dfs.nodes};
  std::size_t last = 0;
  for (std::size_t m = 0; m < dfs.bins.size(); ++m)
    if (dfs.bins[m] != 0.0) last = m;
  g.e.assign(dfs.bins.begin(), dfs.bins.begin() + last + 1);
  for (double& v : g.e) v *= six_over_pi2;

  // Certified tails. The square-full counting function is bounded by
  // zeta(3/2) sqrt(t) for every t >= 1 (write l = a^2 b^3 with b squarefree
  // and sum sqrt(t/b^3) over b), which by partial summation bounds both the
  // missing mass and the missing weighted mean.
  const auto z32 = zeta_em(1.5);
  const double c_up = z32.value + z32.error;
  const double sqrt_l = std::sqrt(static_cast<double>(limit));
  const double arith = 1e-12;  // compensated summation slack
  g.mass_deficit = six_over_pi2 * 3.0 * c_up / sqrt_l + arith;
  g.bin_error = g.mass_deficit;
  double mean = 0.0;
  for (std::size_t m = g.e.size(); m-- > 1;) mean += static_cast<double>(m) * g.e[m];
  g.mean = mean;
  const double j0 = static_cast<double>(seq.first_supported());
  g.mean_error = six_over_pi2 * 2.0 * c_up * (std::log(static_cast<double>(limit)) + 1.0) /
                     (j0 * std::log(2.0) * sqrt_l) +
                 arith;
  return g;
}

OmegaWeightGrid omega_weight_grid(const ExponentSequence& seq, double bin_tol) {
  require_positive_tol(bin_tol, "omega_weight_grid");
  const double amp = 6.0 / (M_PI * M_PI) * 3.0 * 2.6124;  // ~ (18/pi^2) zeta(3/2)
  const double want = amp / (bin_tol * 0.9);
  const double limit_f = want * want;
  if (limit_f > 1e17)
    throw std::domain_error("omega_weight_grid: bin_tol not certifiable by enumeration");
  return omega_weight_grid_limit(seq, std::max<std::uint64_t>(4, static_cast<std::uint64_t>(limit_f)));
}

ConstantEstimate omega_weight(std::uint32_t k, std::uint32_t m, double tol) {
  require_k(k, "omega_weight");
  const auto g = omega_weight_grid(ExponentSequence::indicator(k), tol);
  const double v = (m < g.e.size()) ? g.e[m] : 0.0;
  return {v, g.bin_error, EstimateMethod::enumeration};
}

}  // namespace primexp
