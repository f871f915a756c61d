#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "primexp/arithmetic_f.hpp"

using namespace primexp;

TEST_CASE("tail bound closed forms dominate numeric sums") {
  auto geo = TailBound::geometric(3.0, 0.6);
  double plain = 0, weighted = 0;
  for (std::uint64_t n = 6; n <= 400; ++n) {
    plain += 3.0 * std::pow(0.6, double(n));
    weighted += (2.0 * n - 1.0) * 3.0 * std::pow(0.6, double(n));
  }
  CHECK(geo.sum_above(5) >= plain * (1 - 1e-12));
  CHECK(geo.sum_above(5) <= plain * 1.0001);  // closed form is tight here
  CHECK(geo.weighted_sum_above(5) >= weighted * (1 - 1e-12));
  CHECK(geo.weighted_sum_above(5) <= weighted * 1.0001);

  auto pow_tail = TailBound::power(2.0, 0.5);
  plain = weighted = 0;
  for (std::uint64_t n = 11; n <= 3000000; ++n) {
    plain += 2.0 * std::pow(double(n), -2.5);
    weighted += (2.0 * n - 1.0) * 2.0 * std::pow(double(n), -2.5);
  }
  CHECK(pow_tail.sum_above(10) >= plain);
  CHECK(pow_tail.weighted_sum_above(10) >= weighted);

  auto fin = TailBound::finite(8);
  CHECK(fin.at(8) == 0.0);
  CHECK(fin.at(7) == 1.0);
  CHECK(fin.sum_above(3) == 4.0);        // n = 4..7
  CHECK(fin.weighted_sum_above(3) == 7 * 7 - 3 * 3);
  CHECK(fin.sum_above(7) == 0.0);
  CHECK(fin.sum_above(100) == 0.0);
}

TEST_CASE("tail bound validation") {
  CHECK_THROWS_AS(TailBound::geometric(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(TailBound::geometric(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(TailBound::power(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(TailBound::finite(0), std::invalid_argument);
}

TEST_CASE("degenerate law") {
  ArithmeticDistribution d(builtin_f("degenerate"));
  CHECK(d.pmf(0) == 1.0);
  CHECK(d.pmf(1) == 0.0);
  CHECK(d.cdf(0) == 1.0);
  CHECK(d.mean(1e-12).value == 0.0);
  CHECK(d.variance(1e-12).value == 0.0);
  auto s = d.sample(7, 100);
  for (auto v : s) CHECK(v == 0);
  CHECK(validate(d.f(), 50).ok());
}

TEST_CASE("max-exponent limit law f1") {
  ArithmeticDistribution d(builtin_f("f1"));
  CHECK(d.pmf(0) == 0.0);
  CHECK(std::fabs(d.pmf(1) - 0.6079271018540266) < 1e-12);
  CHECK(std::fabs(d.pmf(2) - 0.2239802707266808) < 1e-12);
  CHECK(std::fabs(d.pmf(3) - 0.09203103034088270) < 1e-12);
  CHECK(std::fabs(d.pmf(4) - 0.04044893750767229) < 1e-12);
  CHECK(validate(d.f(), 200).ok());

  auto mean = d.mean(1e-8);
  CHECK(std::fabs(mean.value - 1.705211140105367764288551) <= mean.error);
  CHECK(mean.error <= 1e-8);
  auto m2 = d.second_moment(1e-8);
  CHECK(std::fabs(m2.value - 4.301302400313366599980689) <= m2.error);
  auto var = d.variance(1e-7);
  CHECK(std::fabs(var.value - 1.393557367973918429046123) <= var.error);

  auto direct = d.mean_direct(40);
  CHECK(std::fabs(direct.value - mean.value) <= direct.error + mean.error);
}

TEST_CASE("f1 defect inequality and decreasing steps") {
  auto f = builtin_f("f1");
  for (std::uint64_t k = 2; k <= 40; ++k)
    CHECK(1.0 - f(k) < std::pow(2.0, 1.0 - double(k)));
  ArithmeticDistribution d(std::move(f));
  for (std::uint64_t k = 1; k <= 30; ++k) CHECK(d.pmf(k) >= d.pmf(k + 1) - 1e-15);
}

TEST_CASE("leading-digit law") {
  ArithmeticDistribution d(builtin_f("f0:10"));
  CHECK(std::fabs(d.pmf(1) - std::log10(2.0)) < 1e-14);
  CHECK(std::fabs(d.pmf(9) - std::log10(10.0 / 9.0)) < 1e-14);
  CHECK(d.pmf(0) == 0.0);
  CHECK(d.pmf(10) == 0.0);
  CHECK(d.cdf(9) == 1.0);
  // Closed mean equals (N-1) - log_N((N-1)!) for N = 10.
  const double expect = 9.0 - std::log(362880.0) / std::log(10.0);
  auto mean = d.mean(1e-10);
  CHECK(std::fabs(mean.value - expect) <= 1e-12);
  CHECK(std::fabs(mean.value - 3.440236967123206248825239) <= 1e-12);
  auto m2 = d.second_moment(1e-10);
  CHECK(std::fabs(m2.value - 17.8917430213367428423105) <= 1e-11);
  auto direct = d.mean_direct(20);
  CHECK(std::fabs(direct.value - mean.value) <= direct.error + mean.error);
  CHECK(validate(d.f(), 40).ok());
}

TEST_CASE("exponent-count laws from the enumeration grid") {
  ArithmeticDistribution d(builtin_f("f2k:2"));
  CHECK(std::fabs(d.pmf(0) - 0.748535) < 5e-6);
  CHECK(std::fabs(d.pmf(1) - 0.226618) < 5e-6);
  CHECK(validate(d.f(), 64).ok());
  auto mean = d.mean(1e-3);
  CHECK(std::fabs(mean.value - 0.2774847807416220) <= mean.error);
  CHECK(mean.error <= 1e-3);

  ArithmeticDistribution ds(builtin_f("fA:S"));
  CHECK(std::fabs(ds.pmf(0) - 6.0 / (M_PI * M_PI)) < 3e-6);
  auto mean_e = ArithmeticDistribution(builtin_f("fA:E")).mean(1e-3);
  CHECK(std::fabs(mean_e.value - 0.330228) <= 2e-3);
  auto mean_o = ArithmeticDistribution(builtin_f("fA:O")).mean(1e-3);
  CHECK(std::fabs(mean_o.value - 0.122017) <= 2e-3);
  // Indicator alias matches f2k.
  auto alias = builtin_f("fA:2");
  CHECK(std::fabs(alias(1) - d.f()(1)) < 1e-12);
}

TEST_CASE("certification failures are refusals, not wrong numbers") {
  auto grid = builtin_f("f2k:3");
  CHECK_THROWS_AS(ArithmeticDistribution(grid).mean(1e-9), std::domain_error);
  auto unc = ArithmeticF::uncertified("custom", [](std::uint64_t n) { return n ? 1.0 : 0.0; });
  CHECK(unc(5) == 1.0);
  CHECK_THROWS_AS(defect_sum_d1(unc, 1e-6), std::domain_error);
  CHECK_THROWS_AS(ArithmeticDistribution(unc).mean_direct(10), std::domain_error);
}

TEST_CASE("validation flags a broken f") {
  auto bad = ArithmeticF::uncertified("bad", [](std::uint64_t n) {
    if (n == 0) return 0.1;            // should be 0
    return n == 3 ? 0.2 : 0.5;         // dips at n = 3
  });
  auto report = validate(bad, 10);
  CHECK(!report.ok());
  CHECK(report.issues.size() >= 2);
  CHECK(!report.tail_checked);
}

TEST_CASE("sampling is deterministic and matches the pmf") {
  ArithmeticDistribution d(builtin_f("f1"));
  auto a = d.sample(12345, 2000);
  auto b = d.sample(12345, 2000);
  CHECK(a == b);
  auto c = d.sample(54321, 2000);
  CHECK(a != c);

  auto big = d.sample(99, 200000);
  std::map<std::uint64_t, std::uint64_t> freq;
  for (auto v : big) ++freq[v];
  CHECK(freq[0] == 0);
  CHECK(std::fabs(double(freq[1]) / 200000 - 0.607927) < 0.005);
  CHECK(std::fabs(double(freq[2]) / 200000 - 0.223980) < 0.005);
  double mean = 0;
  for (auto v : big) mean += double(v);
  mean /= 200000;
  CHECK(std::fabs(mean - 1.705211) < 0.02);
}

TEST_CASE("builtin parsing") {
  CHECK_THROWS_AS(builtin_f("f0"), std::invalid_argument);
  CHECK_THROWS_AS(builtin_f("f0:1"), std::invalid_argument);
  CHECK_THROWS_AS(builtin_f("f2k:1"), std::invalid_argument);
  CHECK_THROWS_AS(builtin_f("fA:x"), std::invalid_argument);
  CHECK_THROWS_AS(builtin_f("nope"), std::invalid_argument);
  CHECK(builtin_f("f0:100").name() == "f0:100");
}
