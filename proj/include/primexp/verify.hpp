#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "primexp/constants.hpp"
#include "primexp/counting.hpp"
#include "primexp/scan.hpp"

namespace primexp {

enum class ScanStat { max_exponent, min_exponent };

// One empirical-vs-predicted comparison at a checkpoint.
struct ConvergenceRow {
  std::uint64_t x = 0;
  double empirical = 0;
  std::string empirical_exact;  // decimal string when the statistic is integral
  double predicted = 0;
  double predicted_error = 0;  // certified error of the prediction constants
  double residual = 0;
  double scaled_residual = 0;  // residual * x^{-theta}
  double theta = 0;            // claimed error exponent
};

struct ExponentFit {
  double claimed = 0;
  double fitted = 0;
  std::size_t points_used = 0;
  bool evaluated = false;  // false when the grid cannot support a fit
  bool pass = false;
  std::string note;
};

// Certified constants shared by the prediction formulas.
struct ConstantsBundle {
  ConstantEstimate b1, b2, g02, g03, g12, g13;
  static ConstantsBundle standard();
};

// 1e4, 2e4, 4e4, ... capped at and always including max_x.
std::vector<std::uint64_t> geometric_grid(std::uint64_t max_x);

std::vector<ConvergenceRow> moment_table(ScanStat stat, int power,
                                         const std::vector<std::uint64_t>& xs,
                                         const std::vector<ScanAggregate>& cps,
                                         const ConstantsBundle& c);
// Empirical variance rows for a stat (power pair combined).
std::vector<ConvergenceRow> variance_table(ScanStat stat, const std::vector<std::uint64_t>& xs,
                                           const std::vector<ScanAggregate>& cps,
                                           const ConstantsBundle& c);
std::vector<ConvergenceRow> count_table(CountKind kind, std::uint32_t k,
                                        const std::vector<std::uint64_t>& xs,
                                        const ConstantsBundle& c);

// Least squares of log|residual| against log x, ignoring rows whose residual
// is within 10x of the certified prediction error. Needs >= 4 usable points
// spanning >= 3 decades; passes when fitted <= claimed + 0.15.
ExponentFit fit_error_exponent(const std::vector<ConvergenceRow>& rows, double claimed);

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0;
  double bound = 0;
  std::string baseline_key;  // empty for fixed (non-baseline) checks
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::uint64_t max_x = 0;
  bool pass = false;
  std::vector<CheckResult> checks;
  std::map<std::string, std::vector<ConvergenceRow>> tables;
};

// check name -> threshold for measured values that have no a priori scale.
using Baselines = std::map<std::string, double>;

// suite: "moments", "counts", "distribution" or "all".
VerifyReport run_verify(const std::string& suite, std::uint64_t max_x, const ScanOptions& opts,
                        const Baselines& baselines);

// Refreshed thresholds (measured * 1.3) for every baseline-backed check.
Baselines measure_baselines(const VerifyReport& report);

// Header exactly: x,empirical,predicted,residual,scaled_residual
std::string table_to_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace primexp
