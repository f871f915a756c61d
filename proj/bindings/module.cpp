// Python bindings for the core operations. Everything crosses the boundary
// as plain Python structures; 128-bit sums become arbitrary-precision ints.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "primexp/arithmetic_f.hpp"
#include "primexp/constants.hpp"
#include "primexp/counting.hpp"
#include "primexp/factor.hpp"
#include "primexp/scan.hpp"
#include "primexp/verify.hpp"

namespace py = pybind11;
using namespace primexp;

namespace {

py::int_ u128_int(uint128 v) {
  PyObject* obj = PyLong_FromString(to_string(v).c_str(), nullptr, 10);
  if (!obj) throw py::error_already_set();
  return py::reinterpret_steal<py::int_>(obj);
}

py::dict hist_dict(const std::array<std::uint64_t, kMaxExponent + 1>& hist) {
  py::dict d;
  for (std::size_t k = 0; k <= kMaxExponent; ++k)
    if (hist[k]) d[py::int_(k)] = hist[k];
  return d;
}

py::dict agg_dict(const ScanAggregate& agg) {
  py::dict d;
  d["count"] = agg.count;
  d["sum_max"] = u128_int(agg.sum_max);
  d["sum_max_sq"] = u128_int(agg.sum_max_sq);
  d["sum_min"] = u128_int(agg.sum_min);
  d["sum_min_sq"] = u128_int(agg.sum_min_sq);
  d["hist_max"] = hist_dict(agg.hist_max);
  d["hist_min"] = hist_dict(agg.hist_min);
  d["omega_totals"] = hist_dict(agg.omega_totals);
  return d;
}

py::dict est_dict(const ConstantEstimate& est) {
  py::dict d;
  d["value"] = est.value;
  d["error_bound"] = est.error;
  d["method"] = estimate_method_name(est.method);
  return d;
}

ExponentSequence parse_sequence(const std::string& spec) {
  auto seq = ExponentSequence::parse(spec);
  if (!seq) throw std::invalid_argument("unknown exponent sequence: " + spec);
  return *seq;
}

py::dict grid_dict(const OmegaWeightGrid& grid) {
  py::dict d;
  d["sequence"] = grid.seq.name();
  d["e"] = grid.e;
  d["bin_error"] = grid.bin_error;
  d["mass_deficit"] = grid.mass_deficit;
  d["mean"] = grid.mean;
  d["mean_error"] = grid.mean_error;
  d["limit"] = grid.limit;
  d["nodes"] = grid.nodes;
  return d;
}

ScanOptions make_opts(unsigned workers, std::uint64_t segment_length) {
  ScanOptions opts;
  opts.workers = workers;
  opts.segment_length = segment_length;
  return opts;
}

}  // namespace

PYBIND11_MODULE(_primexp, m) {
  m.doc() = "exact statistics and certified constants for extreme prime-power exponents";

  m.def(
      "factorize",
      [](std::uint64_t n) {
        py::list out;
        for (const auto& f : factorize(n).factors) out.append(py::make_tuple(f.prime, f.exponent));
        return out;
      },
      py::arg("n"), "prime factorization as a list of (prime, exponent) pairs");

  m.def(
      "max_exponent", [](std::uint64_t n) { return exponent_summary(n).max_exponent; },
      py::arg("n"));
  m.def(
      "min_exponent", [](std::uint64_t n) { return exponent_summary(n).min_exponent; },
      py::arg("n"));
  m.def(
      "omega",
      [](std::uint64_t n, std::uint32_t k) {
        if (k < 1 || k > kMaxExponent) throw std::invalid_argument("omega: k out of range");
        return exponent_summary(n).omega[k];
      },
      py::arg("n"), py::arg("k"), "number of primes whose exponent in n equals k");
  m.def(
      "omega_seq",
      [](std::uint64_t n, const std::string& seq) { return omega_a(n, parse_sequence(seq)); },
      py::arg("n"), py::arg("sequence"),
      "weighted exponent count for sequence 'S', 'E', 'O' or an integer k");

  m.def(
      "scan",
      [](std::uint64_t lo, std::uint64_t hi, unsigned workers, std::uint64_t segment_length) {
        return agg_dict(scan_range(lo, hi, make_opts(workers, segment_length)));
      },
      py::arg("lo"), py::arg("hi"), py::arg("workers") = 1,
      py::arg("segment_length") = std::uint64_t{1} << 20,
      "exact exponent statistics over lo..hi");
  m.def(
      "scan_checkpoints",
      [](const std::vector<std::uint64_t>& xs, unsigned workers, std::uint64_t segment_length) {
        py::list out;
        for (const auto& agg : primexp::scan_checkpoints(xs, make_opts(workers, segment_length)))
          out.append(agg_dict(agg));
        return out;
      },
      py::arg("xs"), py::arg("workers") = 1, py::arg("segment_length") = std::uint64_t{1} << 20,
      "cumulative statistics at each x in the strictly increasing list xs");

  m.def(
      "count_kfree",
      [](std::uint64_t x, std::uint32_t k, const std::string& method) {
        if (method == "sieve") return count_k_free_sieve(x, k).count;
        if (method == "moebius") return count_k_free_mobius(x, k).count;
        throw std::invalid_argument("count_kfree method must be 'sieve' or 'moebius'");
      },
      py::arg("x"), py::arg("k"), py::arg("method") = "moebius");
  m.def(
      "count_kfull", [](std::uint64_t x, std::uint32_t k) { return count_k_full(x, k).count; },
      py::arg("x"), py::arg("k"));

  m.def(
      "zeta", [](double s) { return est_dict(zeta(s)); }, py::arg("s"),
      "certified Riemann zeta for real s in (0,1) or (1,inf)");
  m.def(
      "mean_constant", [](double tol) { return est_dict(max_exponent_mean_constant(tol)); },
      py::arg("tol") = 1e-9, "limit of the average max exponent");
  m.def(
      "second_moment_constant",
      [](double tol) { return est_dict(max_exponent_second_constant(tol)); }, py::arg("tol") = 1e-9);
  m.def(
      "variance_constant", [](double tol) { return est_dict(max_exponent_variance_constant(tol)); },
      py::arg("tol") = 1e-9);
  m.def(
      "gamma0", [](std::uint32_t k, double tol) { return est_dict(min_exponent_gamma0(k, tol)); },
      py::arg("k"), py::arg("tol") = 1e-9, "leading k-full density coefficient");
  m.def(
      "gamma1", [](std::uint32_t k, double tol) { return est_dict(min_exponent_gamma1(k, tol)); },
      py::arg("k"), py::arg("tol") = 1e-9, "second-order k-full density coefficient");
  m.def(
      "exponent_count_mean", [](std::uint32_t k, double tol) { return est_dict(primexp::exponent_count_mean(k, tol)); },
      py::arg("k"), py::arg("tol") = 1e-8);
  m.def(
      "omega_weight_grid",
      [](const std::string& seq, double bin_tol) {
        return grid_dict(primexp::omega_weight_grid(parse_sequence(seq), bin_tol));
      },
      py::arg("sequence"), py::arg("bin_tol") = 1e-5,
      "limiting distribution of the weighted exponent count");

  py::class_<ArithmeticDistribution>(m, "Distribution")
      .def(py::init([](const std::string& spec) {
             return ArithmeticDistribution(builtin_f(spec));
           }),
           py::arg("spec"), "built-in law: degenerate, f1, f0:N, f2k:K, fA:S|E|O|K")
      .def_property_readonly("name",
                             [](const ArithmeticDistribution& d) { return d.f().name(); })
      .def("pmf", &ArithmeticDistribution::pmf, py::arg("k"))
      .def("cdf", &ArithmeticDistribution::cdf, py::arg("k"))
      .def(
          "mean", [](const ArithmeticDistribution& d, double tol) { return est_dict(d.mean(tol)); },
          py::arg("tol") = 1e-8)
      .def(
          "second_moment",
          [](const ArithmeticDistribution& d, double tol) { return est_dict(d.second_moment(tol)); },
          py::arg("tol") = 1e-8)
      .def(
          "variance",
          [](const ArithmeticDistribution& d, double tol) { return est_dict(d.variance(tol)); },
          py::arg("tol") = 1e-8)
      .def(
          "mean_direct",
          [](const ArithmeticDistribution& d, std::uint64_t cutoff) {
            return est_dict(d.mean_direct(cutoff));
          },
          py::arg("cutoff"))
      .def("sample", &ArithmeticDistribution::sample, py::arg("seed"), py::arg("count"))
      .def("validate", [](const ArithmeticDistribution& d, std::uint64_t n_max) {
        const auto report = validate(d.f(), n_max);
        py::dict out;
        out["ok"] = report.ok();
        py::list issues;
        for (const auto& issue : report.issues) {
          py::dict item;
          item["check"] = issue.check;
          item["n"] = issue.n;
          item["lhs"] = issue.lhs;
          item["rhs"] = issue.rhs;
          issues.append(item);
        }
        out["issues"] = issues;
        return out;
      }, py::arg("n_max") = 300);

  m.def(
      "run_verify",
      [](const std::string& suite, std::uint64_t max_x, unsigned workers,
         const std::map<std::string, double>& baselines) {
        const auto rep = primexp::run_verify(suite, max_x, make_opts(workers, std::uint64_t{1} << 20),
                                             baselines);
        py::dict out;
        out["suite"] = rep.suite;
        out["max_x"] = rep.max_x;
        out["pass"] = rep.pass;
        py::list checks;
        for (const auto& c : rep.checks) {
          py::dict item;
          item["name"] = c.name;
          item["pass"] = c.pass;
          item["measured"] = c.measured;
          item["bound"] = c.bound;
          item["baseline_key"] = c.baseline_key;
          item["detail"] = c.detail;
          checks.append(item);
        }
        out["checks"] = checks;
        py::dict tables;
        for (const auto& [name, rows] : rep.tables) {
          py::list jrows;
          for (const auto& r : rows) {
            py::dict row;
            row["x"] = r.x;
            row["empirical"] = r.empirical;
            row["empirical_exact"] = r.empirical_exact;
            row["predicted"] = r.predicted;
            row["predicted_error"] = r.predicted_error;
            row["residual"] = r.residual;
            row["scaled_residual"] = r.scaled_residual;
            row["theta"] = r.theta;
            jrows.append(row);
          }
          tables[py::str(name)] = jrows;
        }
        out["tables"] = tables;
        return out;
      },
      py::arg("suite"), py::arg("max_x"), py::arg("workers") = 1,
      py::arg("baselines") = std::map<std::string, double>{},
      "empirical verification suite; suite is 'all', 'moments', 'counts' or 'distribution'");
}
