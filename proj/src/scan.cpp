#include "primexp/scan.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "primexp/primes.hpp"

namespace primexp {

void ScanAggregate::merge(const ScanAggregate& other) {
  count += other.count;
  sum_max += other.sum_max;
  sum_max_sq += other.sum_max_sq;
  sum_min += other.sum_min;
  sum_min_sq += other.sum_min_sq;
  for (std::size_t k = 0; k <= kMaxExponent; ++k) {
    hist_max[k] += other.hist_max[k];
    hist_min[k] += other.hist_min[k];
    omega_totals[k] += other.omega_totals[k];
  }
}

namespace {

std::uint32_t isqrt64(std::uint64_t n) {
  if (n >= 0xFFFFFFFE00000001ull) return 0xFFFFFFFFu;  // >= (2^32-1)^2
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return static_cast<std::uint32_t>(r);
}

// Work buffers reused across segments by one worker.
struct SegmentBuffers {
  std::vector<std::uint64_t> residual;
  std::vector<std::uint8_t> max_e;
  std::vector<std::uint8_t> min_e;
};

// Runs the segmented factorization of [lo, hi]. For every n the sink sees
// each prime-power factor p^e || n as on_factor(i, e) with i = n - lo, then
// once per segment on_segment(seg_lo, len, max_e, min_e) with the filled
// exponent extremes (n = 1 reported with both extremes equal to 1).
template <class Sink>
void scan_segments(std::uint64_t lo, std::uint64_t hi, std::uint64_t seg_len,
                   const std::vector<std::uint32_t>& base_primes, SegmentBuffers& buf,
                   Sink&& sink) {
  for (std::uint64_t seg_lo = lo; seg_lo <= hi;) {
    const std::uint64_t seg_hi = std::min(hi, seg_lo + seg_len - 1);
    const std::size_t len = static_cast<std::size_t>(seg_hi - seg_lo + 1);
    buf.residual.resize(len);
    buf.max_e.assign(len, 0);
    buf.min_e.assign(len, 255);
    for (std::size_t i = 0; i < len; ++i) buf.residual[i] = seg_lo + i;

    for (std::uint32_t p : base_primes) {
      const std::uint64_t p64 = p;
      if (p64 > seg_hi) break;
      std::uint64_t m = ((seg_lo + p64 - 1) / p64) * p64;
      for (; m <= seg_hi; m += p64) {
        const std::size_t i = static_cast<std::size_t>(m - seg_lo);
        std::uint64_t& r = buf.residual[i];
        std::uint32_t e = 0;
        while (r % p64 == 0) {
          r /= p64;
          ++e;
        }
        if (e > buf.max_e[i]) buf.max_e[i] = static_cast<std::uint8_t>(e);
        if (e < buf.min_e[i]) buf.min_e[i] = static_cast<std::uint8_t>(e);
        sink.on_factor(i, e);
      }
    }
    for (std::size_t i = 0; i < len; ++i) {
      const std::uint64_t n = seg_lo + i;
      if (n == 1) {
        buf.max_e[i] = 1;
        buf.min_e[i] = 1;
        continue;
      }
      if (buf.residual[i] > 1) {
        // Leftover prime factor above sqrt(hi), exponent 1.
        if (buf.max_e[i] == 0) buf.max_e[i] = 1;
        buf.min_e[i] = 1;
        sink.on_factor(i, 1);
      }
    }
    sink.on_segment(seg_lo, len, buf.max_e, buf.min_e);
    if (seg_hi == hi) break;
    seg_lo = seg_hi + 1;
  }
}

struct AggregateSink {
  ScanAggregate agg;

  void on_factor(std::size_t, std::uint32_t e) { ++agg.omega_totals[e]; }

  void on_segment(std::uint64_t, std::size_t len, const std::vector<std::uint8_t>& max_e,
                  const std::vector<std::uint8_t>& min_e) {
    agg.count += len;
    for (std::size_t i = 0; i < len; ++i) {
      const std::uint32_t hi = max_e[i];
      const std::uint32_t lo = min_e[i];
      agg.sum_max += hi;
      agg.sum_max_sq += std::uint64_t{hi} * hi;
      agg.sum_min += lo;
      agg.sum_min_sq += std::uint64_t{lo} * lo;
      ++agg.hist_max[hi];
      ++agg.hist_min[lo];
    }
  }
};

std::vector<std::uint32_t> base_primes_for(std::uint64_t hi) {
  return primes_up_to(isqrt64(hi));
}

}  // namespace

ScanAggregate scan_range(std::uint64_t lo, std::uint64_t hi, const ScanOptions& opts) {
  if (lo < 1 || lo > hi) throw std::invalid_argument("scan_range: need 1 <= lo <= hi");
  if (opts.segment_length == 0) throw std::invalid_argument("scan_range: segment_length == 0");
  const auto base = base_primes_for(hi);
  const std::uint64_t seg_len = opts.segment_length;
  const unsigned workers = std::max(1u, opts.workers);
  const std::uint64_t n_blocks = (hi - lo) / seg_len + 1;

  if (workers == 1 || n_blocks == 1) {
    SegmentBuffers buf;
    AggregateSink sink;
    scan_segments(lo, hi, seg_len, base, buf, sink);
    return sink.agg;
  }

  std::atomic<std::uint64_t> next_block{0};
  std::mutex merge_mu;
  ScanAggregate total;
  auto work = [&] {
    SegmentBuffers buf;
    AggregateSink sink;
    for (;;) {
      const std::uint64_t b = next_block.fetch_add(1, std::memory_order_relaxed);
      if (b >= n_blocks) break;
      const std::uint64_t b_lo = lo + b * seg_len;
      const std::uint64_t b_hi = std::min(hi, b_lo + seg_len - 1);
      scan_segments(b_lo, b_hi, seg_len, base, buf, sink);
    }
    std::lock_guard<std::mutex> g(merge_mu);
    total.merge(sink.agg);
  };
  std::vector<std::thread> pool;
  const unsigned n_threads = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_blocks));
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  return total;
}

std::vector<ScanAggregate> scan_checkpoints(const std::vector<std::uint64_t>& xs,
                                            const ScanOptions& opts) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] < 1 || (i > 0 && xs[i] <= xs[i - 1]))
      throw std::invalid_argument("scan_checkpoints: xs must be >= 1 and strictly increasing");
  }
  std::vector<ScanAggregate> out;
  out.reserve(xs.size());
  ScanAggregate cum;
  std::uint64_t done = 0;  // scanned [1, done]
  for (std::uint64_t x : xs) {
    if (x > done) {
      cum.merge(scan_range(done + 1, x, opts));
      done = x;
    }
    out.push_back(cum);
  }
  return out;
}

void scan_details(std::uint64_t lo, std::uint64_t hi,
                  const std::function<void(const ExponentSummary&)>& emit,
                  std::uint64_t segment_length) {
  if (lo < 1 || lo > hi) throw std::invalid_argument("scan_details: need 1 <= lo <= hi");
  struct DetailSink {
    // Exponents seen per offset; 16 slots is far beyond any 64-bit n.
    std::vector<std::array<std::uint8_t, 16>> exps;
    std::vector<std::uint8_t> n_exps;
    const std::function<void(const ExponentSummary&)>* emit = nullptr;

    void on_factor(std::size_t i, std::uint32_t e) {
      exps[i][n_exps[i]++] = static_cast<std::uint8_t>(e);
    }
    void on_segment(std::uint64_t seg_lo, std::size_t len, const std::vector<std::uint8_t>& max_e,
                    const std::vector<std::uint8_t>& min_e) {
      for (std::size_t i = 0; i < len; ++i) {
        ExponentSummary s;
        s.n = seg_lo + i;
        s.max_exponent = max_e[i];
        s.min_exponent = min_e[i];
        for (std::uint8_t j = 0; j < n_exps[i]; ++j) {
          const std::uint8_t e = exps[i][j];
          ++s.omega[e];
          ++s.distinct;
          s.total += e;
        }
        (*emit)(s);
        n_exps[i] = 0;
      }
    }
  };
  const auto base = base_primes_for(hi);
  SegmentBuffers buf;
  DetailSink sink;
  const std::uint64_t seg_len = std::min<std::uint64_t>(segment_length, hi - lo + 1);
  sink.exps.resize(static_cast<std::size_t>(seg_len));
  sink.n_exps.assign(static_cast<std::size_t>(seg_len), 0);
  sink.emit = &emit;
  scan_segments(lo, hi, seg_len, base, buf, sink);
}

}  // namespace primexp
