// Command line front end: certified constants, exact exponent scans with
// resumable checkpoints, counting functions, distribution tables/samples and
// the verification suite. All output is deterministic for a given flag set;
// worker count never changes bytes.
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "primexp/arithmetic_f.hpp"
#include "primexp/constants.hpp"
#include "primexp/counting.hpp"
#include "primexp/int128.hpp"
#include "primexp/scan.hpp"
#include "primexp/verify.hpp"

using json = nlohmann::ordered_json;
using namespace primexp;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json est_json(const ConstantEstimate& est) {
  return {{"value", est.value}, {"error_bound", est.error}, {"method", estimate_method_name(est.method)}};
}

json grid_json(const OmegaWeightGrid& grid) {
  json entries = json::array();
  for (std::size_t m = 0; m < grid.e.size(); ++m)
    entries.push_back({{"m", m}, {"value", grid.e[m]}, {"error_bound", grid.bin_error}});
  return {{"sequence", grid.seq.name()},
          {"entries", entries},
          {"mass_deficit", grid.mass_deficit},
          {"mean", {{"value", grid.mean}, {"error_bound", grid.mean_error}}},
          {"limit", grid.limit},
          {"nodes", grid.nodes}};
}

json hist_json(const std::array<std::uint64_t, kMaxExponent + 1>& hist) {
  json out = json::object();
  for (std::size_t k = 0; k <= kMaxExponent; ++k)
    if (hist[k]) out[std::to_string(k)] = hist[k];
  return out;
}

struct ScanSelect {
  bool stat_max = true, stat_min = true;
  bool power1 = true, power2 = true;
};

json aggregate_json(const ScanAggregate& agg, const ScanSelect& sel) {
  json out;
  out["count"] = agg.count;
  if (sel.stat_max) {
    if (sel.power1) out["sum_max"] = to_string(agg.sum_max);
    if (sel.power2) out["sum_max_sq"] = to_string(agg.sum_max_sq);
    out["hist_max"] = hist_json(agg.hist_max);
  }
  if (sel.stat_min) {
    if (sel.power1) out["sum_min"] = to_string(agg.sum_min);
    if (sel.power2) out["sum_min_sq"] = to_string(agg.sum_min_sq);
    out["hist_min"] = hist_json(agg.hist_min);
  }
  out["omega_totals"] = hist_json(agg.omega_totals);
  return out;
}

void aggregate_from_json(const json& in, ScanAggregate& agg) {
  agg = ScanAggregate{};
  agg.count = in.at("count").get<std::uint64_t>();
  agg.sum_max = parse_uint128(in.at("sum_max").get<std::string>());
  agg.sum_max_sq = parse_uint128(in.at("sum_max_sq").get<std::string>());
  agg.sum_min = parse_uint128(in.at("sum_min").get<std::string>());
  agg.sum_min_sq = parse_uint128(in.at("sum_min_sq").get<std::string>());
  auto load_hist = [&](const char* key, auto& hist) {
    for (const auto& [k, v] : in.at(key).items())
      hist.at(std::stoul(k)) = v.template get<std::uint64_t>();
  };
  load_hist("hist_max", agg.hist_max);
  load_hist("hist_min", agg.hist_min);
  load_hist("omega_totals", agg.omega_totals);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------- constants

int run_constants(double tol, double grid_tol) {
  json out;
  out["tol"] = tol;
  out["grid_tol"] = grid_tol;
  out["B1"] = est_json(max_exponent_mean_constant(tol));
  out["B2"] = est_json(max_exponent_second_constant(tol));
  out["varM"] = est_json(max_exponent_variance_constant(tol));
  for (std::uint32_t k = 2; k <= 5; ++k)
    out["gamma0_" + std::to_string(k)] = est_json(min_exponent_gamma0(k, tol));
  for (std::uint32_t k = 2; k <= 5; ++k)
    out["gamma1_" + std::to_string(k)] = est_json(min_exponent_gamma1(k, tol));
  json grids;
  for (std::uint32_t k = 2; k <= 5; ++k)
    grids[std::to_string(k)] = grid_json(omega_weight_grid(ExponentSequence::indicator(k), grid_tol));
  grids["S"] = grid_json(omega_weight_grid(ExponentSequence::all(), grid_tol));
  grids["E"] = grid_json(omega_weight_grid(ExponentSequence::even(), grid_tol));
  grids["O"] = grid_json(omega_weight_grid(ExponentSequence::odd(), grid_tol));
  out["e"] = std::move(grids);
  std::cout << out.dump(2) << "\n";
  return 0;
}

// --------------------------------------------------------------------- scan

struct ScanArgs {
  std::uint64_t max_x = 0;
  std::vector<std::string> stats{"M", "m"};
  std::vector<std::uint32_t> powers{1, 2};
  std::string checkpoints;  // "" or "geometric"
  unsigned workers = 1;
  std::uint64_t segment_length = std::uint64_t{1} << 20;
  std::string format = "json";
  std::string state_path;
};

int run_scan(const ScanArgs& args) {
  ScanSelect sel;
  sel.stat_max = sel.stat_min = false;
  for (const auto& s : args.stats) {
    if (s == "M")
      sel.stat_max = true;
    else if (s == "m")
      sel.stat_min = true;
    else
      throw CLI::ValidationError("--stats entries must be M or m");
  }
  sel.power1 = sel.power2 = false;
  for (auto p : args.powers) {
    if (p == 1)
      sel.power1 = true;
    else if (p == 2)
      sel.power2 = true;
    else
      throw CLI::ValidationError("--powers entries must be 1 or 2");
  }

  ScanOptions opts;
  opts.workers = args.workers;
  opts.segment_length = args.segment_length;

  // with a state file the scan always advances checkpoint by checkpoint so
  // progress survives interruption; printing them stays opt-in
  const bool staged = args.checkpoints == "geometric" || !args.state_path.empty();
  const std::vector<std::uint64_t> xs =
      staged ? geometric_grid(args.max_x) : std::vector<std::uint64_t>{args.max_x};

  ScanAggregate agg;
  std::vector<std::pair<std::uint64_t, ScanAggregate>> done;
  std::uint64_t processed = 0;

  if (!args.state_path.empty() && std::filesystem::exists(args.state_path)) {
    std::ifstream in(args.state_path);
    json state = json::parse(in);
    if (state.at("max_x") != args.max_x)
      throw CLI::ValidationError("state file was written for a different scan configuration");
    processed = state.at("processed_up_to").get<std::uint64_t>();
    ScanSelect full;
    for (const auto& cp : state.at("checkpoints")) {
      ScanAggregate a;
      aggregate_from_json(cp.at("aggregate"), a);
      done.emplace_back(cp.at("x").get<std::uint64_t>(), a);
    }
    if (!done.empty()) agg = done.back().second;
  }

  auto save_state = [&]() {
    if (args.state_path.empty()) return;
    ScanSelect full;
    json cps = json::array();
    for (const auto& [x, a] : done) cps.push_back({{"x", x}, {"aggregate", aggregate_json(a, full)}});
    json state = {{"command", "scan"},
                  {"max_x", args.max_x},
                  {"processed_up_to", processed},
                  {"checkpoints", std::move(cps)}};
    write_text_file(args.state_path, state.dump(2) + "\n");
  };

  for (std::uint64_t x : xs) {
    if (x <= processed) continue;
    ScanAggregate part = scan_range(processed + 1, x, opts);
    agg.merge(part);
    processed = x;
    done.emplace_back(x, agg);
    save_state();
  }

  if (args.format == "csv") {
    std::string header = "x,count";
    if (sel.stat_max && sel.power1) header += ",sum_max";
    if (sel.stat_max && sel.power2) header += ",sum_max_sq";
    if (sel.stat_min && sel.power1) header += ",sum_min";
    if (sel.stat_min && sel.power2) header += ",sum_min_sq";
    std::cout << header << "\n";
    for (const auto& [x, a] : done) {
      std::string row = std::to_string(x) + "," + std::to_string(a.count);
      if (sel.stat_max && sel.power1) row += "," + to_string(a.sum_max);
      if (sel.stat_max && sel.power2) row += "," + to_string(a.sum_max_sq);
      if (sel.stat_min && sel.power1) row += "," + to_string(a.sum_min);
      if (sel.stat_min && sel.power2) row += "," + to_string(a.sum_min_sq);
      std::cout << row << "\n";
    }
    return 0;
  }

  json out;
  out["max_x"] = args.max_x;
  json stats = json::array();
  if (sel.stat_max) stats.push_back("M");
  if (sel.stat_min) stats.push_back("m");
  out["stats"] = std::move(stats);
  json powers = json::array();
  if (sel.power1) powers.push_back(1);
  if (sel.power2) powers.push_back(2);
  out["powers"] = std::move(powers);
  out["totals"] = aggregate_json(agg, sel);
  if (args.checkpoints == "geometric") {
    json cps = json::array();
    for (const auto& [x, a] : done) {
      json cp = aggregate_json(a, sel);
      cps.push_back({{"x", x}, {"aggregate", std::move(cp)}});
    }
    out["checkpoints"] = std::move(cps);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

// -------------------------------------------------------------------- counts

int run_counts(const std::string& kind, std::uint32_t k, std::uint64_t x, std::string method) {
  CountReport rep;
  if (kind == "kfree") {
    if (method.empty()) method = "moebius";
    if (method == "sieve")
      rep = count_k_free_sieve(x, k);
    else if (method == "moebius")
      rep = count_k_free_mobius(x, k);
    else
      throw CLI::ValidationError("k-free counting supports --method sieve or moebius");
  } else if (kind == "kfull") {
    if (method.empty()) method = "enumeration";
    if (method != "enumeration")
      throw CLI::ValidationError("k-full counting supports --method enumeration only");
    rep = count_k_full(x, k);
  } else {
    throw CLI::ValidationError("--kind must be kfree or kfull");
  }
  json out = {{"x", rep.x},
              {"k", rep.k},
              {"kind", count_kind_name(rep.kind)},
              {"method", count_method_name(rep.method)},
              {"count", rep.count}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------------- dist

struct DistArgs {
  std::string f = "f1";
  std::uint64_t kmax = 10;
  bool moments = false;
  double tol = 1e-8;
  std::uint64_t sample = 0;
  std::uint64_t seed = 0;
};

int run_dist(const DistArgs& args) {
  ArithmeticDistribution law(builtin_f(args.f));
  if (args.sample > 0) {
    for (std::uint64_t v : law.sample(args.seed, args.sample)) std::cout << v << "\n";
    return 0;
  }
  if (args.moments) {
    json out;
    out["f"] = law.f().name();
    out["tol"] = args.tol;
    out["mean"] = est_json(law.mean(args.tol));
    out["second_moment"] = est_json(law.second_moment(args.tol));
    out["variance"] = est_json(law.variance(args.tol));
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "k,pmf,cdf\n";
  for (std::uint64_t k = 1; k <= args.kmax; ++k)
    std::cout << k << "," << fmt17(law.pmf(k)) << "," << fmt17(law.cdf(k)) << "\n";
  return 0;
}

// -------------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t max_x = 0;
  unsigned workers = 1;
  std::string baselines_path;
  std::string write_baselines_path;
  std::string out_dir;
};

json report_json(const VerifyReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"measured", c.measured},
                      {"bound", c.bound},
                      {"baseline_key", c.baseline_key},
                      {"detail", c.detail}});
  json tables;
  for (const auto& [name, rows] : rep.tables) {
    json jrows = json::array();
    for (const auto& r : rows)
      jrows.push_back({{"x", r.x},
                       {"empirical", r.empirical},
                       {"empirical_exact", r.empirical_exact},
                       {"predicted", r.predicted},
                       {"predicted_error", r.predicted_error},
                       {"residual", r.residual},
                       {"scaled_residual", r.scaled_residual},
                       {"theta", r.theta}});
    tables[name] = std::move(jrows);
  }
  return {{"suite", rep.suite},
          {"max_x", rep.max_x},
          {"pass", rep.pass},
          {"checks", std::move(checks)},
          {"tables", std::move(tables)}};
}

int run_verify_cmd(const VerifyArgs& args) {
  Baselines baselines;
  std::string path = args.baselines_path;
  if (path.empty() && std::filesystem::exists("data/verify_baselines.json"))
    path = "data/verify_baselines.json";
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot read baselines file: " + path);
    const json parsed = json::parse(in);
    for (const auto& [key, value] : parsed.items()) baselines[key] = value.get<double>();
  }

  ScanOptions opts;
  opts.workers = args.workers;
  const VerifyReport rep = run_verify(args.suite, args.max_x, opts, baselines);

  for (const auto& c : rep.checks) {
    std::fprintf(stderr, "[%s] %-38s measured=%-13.6g bound=%-13.6g %s\n", c.pass ? "PASS" : "FAIL",
                 c.name.c_str(), c.measured, c.bound, c.detail.c_str());
  }
  std::fprintf(stderr, "%s: %zu checks, %zu failed\n", rep.pass ? "PASS" : "FAIL",
               rep.checks.size(),
               static_cast<std::size_t>(std::count_if(rep.checks.begin(), rep.checks.end(),
                                                      [](const auto& c) { return !c.pass; })));

  const json report = report_json(rep);
  std::cout << report.dump(2) << "\n";

  if (!args.out_dir.empty()) {
    std::filesystem::create_directories(args.out_dir);
    write_text_file(std::filesystem::path(args.out_dir) / "report.json", report.dump(2) + "\n");
    for (const auto& [name, rows] : rep.tables) {
      std::string file = name;
      for (char& ch : file)
        if (ch == '/') ch = '_';
      write_text_file(std::filesystem::path(args.out_dir) / (file + ".csv"), table_to_csv(rows));
    }
  }

  if (!args.write_baselines_path.empty()) {
    json base;
    for (const auto& [key, value] : measure_baselines(rep)) base[key] = value;
    write_text_file(args.write_baselines_path, base.dump(2) + "\n");
    // bootstrap mode: only the fixed checks gate the exit code
    for (const auto& c : rep.checks)
      if (c.baseline_key.empty() && !c.pass) return 1;
    return 0;
  }
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact statistics and certified constants for extreme prime-power exponents"};
  app.require_subcommand(1);

  double const_tol = 1e-9, const_grid_tol = 1e-5;
  auto* c_const = app.add_subcommand("constants", "print every certified constant as JSON");
  c_const->add_option("--tol", const_tol, "certified error target for series/product constants")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_const->add_option("--grid-tol", const_grid_tol, "per-bin certified error target for e grids")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  ScanArgs scan_args;
  auto* c_scan = app.add_subcommand("scan", "exact exponent statistics over 1..max-x");
  c_scan->add_option("--max-x", scan_args.max_x, "upper end of the scan")
      ->required()
      ->check(CLI::PositiveNumber);
  c_scan->add_option("--stats", scan_args.stats, "statistics to report (M, m)")
      ->delimiter(',')
      ->capture_default_str();
  c_scan->add_option("--powers", scan_args.powers, "moment powers to report (1, 2)")
      ->delimiter(',')
      ->capture_default_str();
  c_scan->add_option("--checkpoints", scan_args.checkpoints, "emit intermediate totals (geometric)")
      ->check(CLI::IsMember({"geometric"}));
  c_scan->add_option("--workers", scan_args.workers, "scan thread count")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  c_scan->add_option("--segment-length", scan_args.segment_length, "sieve segment length")
      ->check(CLI::Range(std::uint64_t{1} << 10, std::uint64_t{1} << 26))
      ->capture_default_str();
  c_scan->add_option("--format", scan_args.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  c_scan->add_option("--state", scan_args.state_path,
                     "checkpoint state file; an existing file resumes the scan");

  std::string counts_kind, counts_method;
  std::uint32_t counts_k = 2;
  std::uint64_t counts_x = 0;
  auto* c_counts = app.add_subcommand("counts", "k-free / k-full counting functions");
  c_counts->add_option("--kind", counts_kind, "kfree or kfull")->required();
  c_counts->add_option("--k", counts_k, "exponent threshold k >= 2")
      ->required()
      ->check(CLI::Range(2u, 63u));
  c_counts->add_option("--x", counts_x, "count up to x")->required()->check(CLI::PositiveNumber);
  c_counts->add_option("--method", counts_method, "sieve, moebius or enumeration");

  DistArgs dist_args;
  auto* c_dist = app.add_subcommand("dist", "arithmetic-f distribution tables, moments, samples");
  c_dist->add_option("--f", dist_args.f, "distribution spec: degenerate, f1, f0:N, f2k:K, fA:S|E|O|K")
      ->capture_default_str();
  c_dist->add_option("--kmax", dist_args.kmax, "last k of the pmf/cdf table")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 20))
      ->capture_default_str();
  c_dist->add_flag("--moments", dist_args.moments, "print certified moments as JSON");
  c_dist->add_option("--tol", dist_args.tol, "certified error target for moments")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_dist->add_option("--sample", dist_args.sample, "draw this many samples, one per line");
  c_dist->add_option("--seed", dist_args.seed, "sampling seed")->capture_default_str();

  VerifyArgs verify_args;
  auto* c_verify = app.add_subcommand("verify", "run the empirical verification suite");
  c_verify->add_option("--suite", verify_args.suite, "all, moments, counts or distribution")
      ->check(CLI::IsMember({"all", "moments", "counts", "distribution"}))
      ->capture_default_str();
  c_verify->add_option("--max-x", verify_args.max_x, "top of the checkpoint grid")
      ->required()
      ->check(CLI::PositiveNumber);
  c_verify->add_option("--workers", verify_args.workers, "scan thread count")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  c_verify->add_option("--baselines", verify_args.baselines_path,
                       "baseline thresholds (default: data/verify_baselines.json if present)");
  c_verify->add_option("--write-baselines", verify_args.write_baselines_path,
                       "record measured thresholds with headroom to this file");
  c_verify->add_option("--out", verify_args.out_dir, "write report.json and table CSVs here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*c_const) return run_constants(const_tol, const_grid_tol);
    if (*c_scan) return run_scan(scan_args);
    if (*c_counts) return run_counts(counts_kind, counts_k, counts_x, counts_method);
    if (*c_dist) return run_dist(dist_args);
    if (*c_verify) return run_verify_cmd(verify_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
