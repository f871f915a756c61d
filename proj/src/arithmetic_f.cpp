#include "primexp/arithmetic_f.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>

namespace primexp {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

std::uint64_t parse_u64(std::string_view text, const char* who) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size())
    throw std::invalid_argument(std::string(who) + ": bad integer '" + std::string(text) + "'");
  return v;
}
}  // namespace

TailBound::TailBound(Kind kind, std::uint64_t end, double amp, double second)
    : kind_(kind), end_(end), amp_(amp), second_(second) {}

TailBound TailBound::finite(std::uint64_t support_end) {
  if (support_end < 1) throw std::invalid_argument("TailBound::finite: support_end >= 1");
  return {Kind::finite, support_end, 0, 0};
}

TailBound TailBound::geometric(double amp, double ratio) {
  if (!(amp > 0) || !(ratio > 0) || !(ratio < 1))
    throw std::invalid_argument("TailBound::geometric: need amp > 0, 0 < ratio < 1");
  return {Kind::geometric, 0, amp, ratio};
}

TailBound TailBound::power(double amp, double eps) {
  if (!(amp > 0) || !(eps > 0))
    throw std::invalid_argument("TailBound::power: need amp > 0, eps > 0");
  return {Kind::power, 0, amp, eps};
}

double TailBound::at(std::uint64_t n) const {
  switch (kind_) {
    case Kind::finite: return n >= end_ ? 0.0 : 1.0;
    case Kind::geometric:
      return std::min(1.0, amp_ * std::pow(second_, static_cast<double>(n)));
    case Kind::power:
      if (n == 0) return 1.0;
      return std::min(1.0, amp_ * std::pow(static_cast<double>(n), -(2.0 + second_)));
  }
  return 1.0;
}

double TailBound::sum_above(std::uint64_t cutoff) const {
  const double c = static_cast<double>(cutoff);
  switch (kind_) {
    case Kind::finite:
      return end_ >= cutoff + 2 ? static_cast<double>(end_ - 1 - cutoff) : 0.0;
    case Kind::geometric:
      return amp_ * std::pow(second_, c + 1.0) / (1.0 - second_);
    case Kind::power: {
      if (cutoff == 0) return std::numeric_limits<double>::infinity();
      const double e = second_;
      return amp_ * (std::pow(c, -1.0 - e) / (1.0 + e) + std::pow(c, -2.0 - e));
    }
  }
  return 0.0;
}

double TailBound::weighted_sum_above(std::uint64_t cutoff) const {
  const double c = static_cast<double>(cutoff);
  switch (kind_) {
    case Kind::finite: {
      if (end_ < cutoff + 2) return 0.0;
      const double top = static_cast<double>(end_ - 1);
      return top * top - c * c;  // sum of 2n-1 over (cutoff, end_)
    }
    case Kind::geometric: {
      const double r = second_;
      const double rk = std::pow(r, c + 1.0);
      const double sum_n = rk * ((c + 1.0) - c * r) / ((1.0 - r) * (1.0 - r));
      const double sum_1 = rk / (1.0 - r);
      return amp_ * (2.0 * sum_n - sum_1);
    }
    case Kind::power: {
      if (cutoff == 0) return std::numeric_limits<double>::infinity();
      const double e = second_;
      return 2.0 * amp_ * (std::pow(c, -e) / e + std::pow(c, -1.0 - e));
    }
  }
  return 0.0;
}

std::string TailBound::describe() const {
  char buf[96];
  switch (kind_) {
    case Kind::finite:
      std::snprintf(buf, sizeof buf, "finite(%llu)", static_cast<unsigned long long>(end_));
      break;
    case Kind::geometric:
      std::snprintf(buf, sizeof buf, "geometric(%.6g, %.6g)", amp_, second_);
      break;
    case Kind::power:
      std::snprintf(buf, sizeof buf, "power(%.6g, %.6g)", amp_, second_);
      break;
  }
  return buf;
}

ArithmeticF::ArithmeticF(std::string name, std::function<double(std::uint64_t)> eval,
                         double eval_error, TailBound tail)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      eval_error_(eval_error),
      certified_(true),
      tail_(tail) {}

ArithmeticF ArithmeticF::uncertified(std::string name, std::function<double(std::uint64_t)> eval) {
  ArithmeticF f(std::move(name), std::move(eval), 0.0, TailBound::finite(1));
  f.certified_ = false;
  return f;
}

const TailBound& ArithmeticF::tail() const {
  if (!certified_) throw std::domain_error("ArithmeticF: no certified tail bound for " + name_);
  return tail_;
}

double ArithmeticF::clamp_eval(std::uint64_t n) const {
  const double v = eval_(n);
  if (std::isnan(v)) throw std::domain_error("ArithmeticF: evaluation returned NaN");
  return v;
}

// ---------- builtins ----------

namespace {

ArithmeticF make_degenerate() {
  return ArithmeticF(
      "degenerate", [](std::uint64_t n) { return n == 0 ? 0.0 : 1.0; }, 0.0, TailBound::finite(1));
}

ArithmeticF make_f1() {
  // 1/zeta(n), the limit law of the max exponent. The defect satisfies
  // 1 - 1/zeta(n) < 2^{1-n}.
  auto table = std::make_shared<std::vector<double>>();
  auto mu = std::make_shared<std::mutex>();
  auto eval = [table, mu](std::uint64_t n) {
    if (n <= 1) return 0.0;
    if (n >= 80) return 1.0;  // defect < 2^-79, below eval_error
    std::lock_guard<std::mutex> g(*mu);
    if (table->empty()) {
      table->resize(80, 0.0);
      for (std::uint64_t k = 2; k < 80; ++k)
        (*table)[k] = 1.0 / zeta(static_cast<double>(k)).value;
    }
    return (*table)[n];
  };
  return ArithmeticF("f1", eval, 1e-13, TailBound::geometric(2.0, 0.5));
}

ArithmeticF make_benford(std::uint64_t base_n) {
  if (base_n < 2) throw std::invalid_argument("builtin_f: f0 base must be >= 2");
  const double log_n = std::log(static_cast<double>(base_n));
  auto eval = [base_n, log_n](std::uint64_t n) {
    if (n == 0) return 0.0;
    if (n >= base_n) return 1.0;
    return std::log(static_cast<double>(n)) / log_n;
  };
  return ArithmeticF("f0:" + std::to_string(base_n), eval, 8.0 * kEps,
                     TailBound::finite(base_n));
}

ArithmeticF make_grid_f(const ExponentSequence& seq, std::string name) {
  struct GridState {
    std::mutex mu;
    bool built = false;
    std::vector<double> prefix;  // prefix[n] = sum_{m < n} e[m]
    double deficit = 0;
  };
  auto state = std::make_shared<GridState>();
  const double bin_tol = 2e-6;
  auto eval = [state, seq, bin_tol](std::uint64_t n) {
    std::lock_guard<std::mutex> g(state->mu);
    if (!state->built) {
      const auto grid = omega_weight_grid(seq, bin_tol);
      state->prefix.assign(grid.e.size() + 1, 0.0);
      for (std::size_t m = 0; m < grid.e.size(); ++m)
        state->prefix[m + 1] = state->prefix[m] + grid.e[m];
      state->deficit = grid.mass_deficit;
      state->built = true;
    }
    if (n == 0) return 0.0;
    const std::size_t idx = std::min<std::uint64_t>(n, state->prefix.size() - 1);
    return state->prefix[idx];
  };
  // Any prime counted by the weights has exponent >= j0, so a value with
  // count >= n is square-full and at least 2^{j0 n}; the square-full mass
  // above T is below (18/pi^2) zeta(3/2) / sqrt(T).
  const double amp = 4.78;
  const double ratio = std::pow(2.0, -0.5 * static_cast<double>(seq.first_supported()));
  return ArithmeticF(std::move(name), eval, 2.1e-6, TailBound::geometric(amp, ratio));
}

}  // namespace

ArithmeticF builtin_f(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view arg =
      colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (head == "degenerate" && arg.empty()) return make_degenerate();
  if (head == "f1" && arg.empty()) return make_f1();
  if (head == "f0") return make_benford(parse_u64(arg, "builtin_f"));
  if (head == "f2k") {
    const auto k = parse_u64(arg, "builtin_f");
    if (k < 2 || k > 32) throw std::invalid_argument("builtin_f: f2k needs k in [2, 32]");
    return make_grid_f(ExponentSequence::indicator(static_cast<std::uint32_t>(k)),
                       "f2k:" + std::to_string(k));
  }
  if (head == "fA") {
    const auto seq = ExponentSequence::parse(arg);
    if (!seq) throw std::invalid_argument("builtin_f: fA needs S, E, O or an integer k >= 2");
    return make_grid_f(*seq, "fA:" + std::string(arg));
  }
  throw std::invalid_argument("builtin_f: unknown spec '" + std::string(spec) + "'");
}

ValidationReport validate(const ArithmeticF& f, std::uint64_t n_max) {
  ValidationReport report;
  const double ev = f.eval_error() + 4.0 * kEps;
  if (std::fabs(f(0)) > ev) report.issues.push_back({"f(0) == 0", 0, f(0), 0.0});
  double prev = f(0);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const double v = f(n);
    if (v < prev - 2.0 * ev) report.issues.push_back({"monotone", n, v, prev});
    if (v > 1.0 + ev) report.issues.push_back({"bounded by 1", n, v, 1.0});
    if (f.certified()) {
      const double defect = 1.0 - v;
      const double cap = f.tail().at(n) + ev;
      if (defect > cap) report.issues.push_back({"tail majorant", n, defect, cap});
    }
    prev = v;
  }
  report.tail_checked = f.certified();
  return report;
}

namespace {

// Smallest cutoff whose certified tail stays below budget, or 0 if none.
std::uint64_t pick_cutoff(const TailBound& tail, double budget, bool weighted) {
  auto tail_at = [&](std::uint64_t c) {
    return weighted ? tail.weighted_sum_above(c) : tail.sum_above(c);
  };
  std::uint64_t hi = 4;
  while (hi < (std::uint64_t{1} << 24) && tail_at(hi) > budget) hi *= 2;
  if (tail_at(hi) > budget) return 0;
  std::uint64_t lo = 1;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (tail_at(mid) <= budget)
      hi = mid;
    else
      lo = mid + 1;
  }
  return hi;
}

ConstantEstimate defect_sum_impl(const ArithmeticF& f, double tol, bool weighted,
                                 const char* who) {
  if (!(tol > 0)) throw std::invalid_argument(std::string(who) + ": tol must be positive");
  if (!f.certified())
    throw std::domain_error(std::string(who) + ": " + f.name() + " has no certified tail bound");
  const std::uint64_t cutoff = pick_cutoff(f.tail(), tol / 2.0, weighted);
  if (cutoff == 0)
    throw std::domain_error(std::string(who) + ": tail bound cannot certify tol for " + f.name());
  double sum = 0.0;
  for (std::uint64_t k = cutoff; k >= 2; --k) {
    const double defect = 1.0 - f(k);
    sum += weighted ? (2.0 * static_cast<double>(k) - 1.0) * defect : defect;
  }
  const double tail = weighted ? f.tail().weighted_sum_above(cutoff) : f.tail().sum_above(cutoff);
  const double weight_cap = weighted ? 2.0 * static_cast<double>(cutoff) : 1.0;
  const double evals = static_cast<double>(cutoff) * f.eval_error() * weight_cap;
  const double rounding = 4.0 * kEps * static_cast<double>(cutoff) * (std::fabs(sum) + 1.0);
  const double err = tail + evals + rounding;
  if (err > tol)
    throw std::domain_error(std::string(who) + ": certified error " + std::to_string(err) +
                            " exceeds tol for " + f.name());
  return {sum, err, EstimateMethod::series};
}

}  // namespace

ConstantEstimate defect_sum_d1(const ArithmeticF& f, double tol) {
  return defect_sum_impl(f, tol, false, "defect_sum_d1");
}

ConstantEstimate defect_sum_d2(const ArithmeticF& f, double tol) {
  return defect_sum_impl(f, tol, true, "defect_sum_d2");
}

ArithmeticDistribution::ArithmeticDistribution(ArithmeticF f) : f_(std::move(f)) {}

double ArithmeticDistribution::pmf(std::uint64_t k) const { return f_(k + 1) - f_(k); }

double ArithmeticDistribution::cdf(std::uint64_t k) const { return f_(k + 1); }

ConstantEstimate ArithmeticDistribution::mean(double tol) const {
  const auto d1 = defect_sum_d1(f_, tol / 2.0);
  const double head = 1.0 - f_(1);
  return {head + d1.value, d1.error + f_.eval_error() + 4.0 * kEps, EstimateMethod::derived};
}

ConstantEstimate ArithmeticDistribution::second_moment(double tol) const {
  const auto d2 = defect_sum_d2(f_, tol / 2.0);
  const double head = 1.0 - f_(1);
  return {head + d2.value, d2.error + f_.eval_error() + 8.0 * kEps, EstimateMethod::derived};
}

ConstantEstimate ArithmeticDistribution::variance(double tol) const {
  const auto m1 = mean(tol / 8.0);
  const auto m2 = second_moment(tol / 2.0);
  const double value = m2.value - m1.value * m1.value;
  const double err = m2.error + m1.error * (2.0 * std::fabs(m1.value) + m1.error) +
                     8.0 * kEps * (std::fabs(m2.value) + m1.value * m1.value);
  return {value, err, EstimateMethod::derived};
}

ConstantEstimate ArithmeticDistribution::mean_direct(std::uint64_t cutoff) const {
  if (cutoff < 1) throw std::invalid_argument("mean_direct: cutoff must be >= 1");
  if (!f_.certified())
    throw std::domain_error("mean_direct: " + f_.name() + " has no certified tail bound");
  // Telescoped: sum_{k<=K} k p_k = K f(K+1) - sum_{j=1..K} f(j).
  double sum_f = 0.0;
  for (std::uint64_t j = cutoff; j >= 1; --j) sum_f += f_(j);
  const double kd = static_cast<double>(cutoff);
  const double value = kd * f_(cutoff + 1) - sum_f;
  // Remainder: sum_{k>K} k p_k = (K+1)(1 - f(K+1)) + sum_{j>K+1} (1 - f(j)).
  const double tail =
      (kd + 1.0) * f_.tail().at(cutoff + 1) + f_.tail().sum_above(cutoff + 1);
  const double evals = 2.0 * (kd + 1.0) * f_.eval_error();
  const double rounding = 4.0 * kEps * (kd + 1.0) * (std::fabs(value) + 1.0);
  return {value, tail + evals + rounding, EstimateMethod::series};
}

std::vector<std::uint64_t> ArithmeticDistribution::sample(std::uint64_t seed,
                                                          std::size_t count) const {
  std::mt19937_64 rng(seed);
  std::vector<double> cdf_cache;  // cdf_cache[k] = f(k+1)
  auto cdf_at = [&](std::size_t k) {
    while (cdf_cache.size() <= k)
      cdf_cache.push_back(f_(static_cast<std::uint64_t>(cdf_cache.size()) + 1));
    return cdf_cache[k];
  };
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    std::size_t k = 0;
    while (cdf_at(k) <= u) {
      ++k;
      if (k > 10000000)
        throw std::runtime_error("sample: cdf of " + f_.name() + " does not reach " +
                                 std::to_string(u));
    }
    out.push_back(k);
  }
  return out;
}

}  // namespace primexp
