#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "primexp/factor.hpp"
#include "primexp/int128.hpp"

namespace primexp {

// Exact integer statistics of max/min exponents over a range of n.
// Merging is commutative and associative, so any segmentation or thread
// scheduling yields bit-identical totals.
struct ScanAggregate {
  std::uint64_t count = 0;
  uint128 sum_max = 0;
  uint128 sum_max_sq = 0;
  uint128 sum_min = 0;
  uint128 sum_min_sq = 0;
  // hist_max[k] = #{n in range : max exponent == k}; same for min.
  std::array<std::uint64_t, kMaxExponent + 1> hist_max{};
  std::array<std::uint64_t, kMaxExponent + 1> hist_min{};
  // omega_totals[k] = sum over the range of #{p : p^k || n}.
  std::array<std::uint64_t, kMaxExponent + 1> omega_totals{};

  void merge(const ScanAggregate& other);
  friend bool operator==(const ScanAggregate&, const ScanAggregate&) = default;
};

struct ScanOptions {
  std::uint64_t segment_length = std::uint64_t{1} << 20;
  unsigned workers = 1;
};

// Factorizes every n in [lo, hi] by a segmented sieve and accumulates
// exponent statistics. Requires 1 <= lo <= hi.
ScanAggregate scan_range(std::uint64_t lo, std::uint64_t hi, const ScanOptions& opts = {});

// Cumulative aggregates over [1, x] for each x in xs (strictly increasing).
std::vector<ScanAggregate> scan_checkpoints(const std::vector<std::uint64_t>& xs,
                                            const ScanOptions& opts = {});

// Per-n summaries in increasing order; single-threaded, meant for oracle
// comparisons and small ranges.
void scan_details(std::uint64_t lo, std::uint64_t hi,
                  const std::function<void(const ExponentSummary&)>& emit,
                  std::uint64_t segment_length = std::uint64_t{1} << 20);

}  // namespace primexp
