#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "primexp/scan.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "primexp_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const auto out_path = scratch_dir() / ("out" + std::to_string(counter));
  const auto err_path = scratch_dir() / ("err" + std::to_string(counter));
  ++counter;
  const std::string cmd = std::string("\"") + PRIMEXP_CLI_PATH + "\" " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int rc = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  res.out = slurp(out_path);
  res.err = slurp(err_path);
  return res;
}

}  // namespace

TEST_CASE("constants command prints the headline digits") {
  auto res = run_cli("constants --tol 1e-9");
  REQUIRE(res.exit_code == 0);
  const json d = json::parse(res.out);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9f", d["B1"]["value"].get<double>());
  CHECK(std::string(buf) == "1.705211140");
  std::snprintf(buf, sizeof(buf), "%.9f", d["B2"]["value"].get<double>());
  CHECK(std::string(buf) == "4.301302400");
  std::snprintf(buf, sizeof(buf), "%.9f", d["varM"]["value"].get<double>());
  CHECK(std::string(buf) == "1.393557368");
  CHECK(d["B1"]["error_bound"].get<double>() <= 1e-9);
  CHECK(d["B2"]["error_bound"].get<double>() <= 1e-9);
  for (const char* key : {"gamma0_2", "gamma0_3", "gamma0_4", "gamma0_5", "gamma1_2", "gamma1_3",
                          "gamma1_4", "gamma1_5"}) {
    CHECK(d.contains(key));
    CHECK(d[key]["error_bound"].get<double>() < 1e-6);
  }
  for (const char* key : {"2", "3", "4", "5", "S", "E", "O"}) {
    REQUIRE(d["e"].contains(key));
    double total = 0;
    for (const auto& entry : d["e"][key]["entries"]) total += entry["value"].get<double>();
    CHECK(total <= 1.0);
    CHECK(total >= 1.0 - d["e"][key]["mass_deficit"].get<double>() -
                      d["e"][key]["entries"].size() * 1e-5);
  }
  CHECK(d["e"]["2"]["entries"][0]["value"].get<double>() == doctest::Approx(0.748535).epsilon(1e-4));
}

TEST_CASE("scan json matches the library and filters fields") {
  auto res = run_cli("scan --max-x 50000 --checkpoints geometric");
  REQUIRE(res.exit_code == 0);
  const json d = json::parse(res.out);
  CHECK(d["max_x"] == 50000);
  const auto agg = primexp::scan_range(1, 50000);
  CHECK(d["totals"]["count"] == 50000);
  CHECK(d["totals"]["sum_max"].get<std::string>() == primexp::to_string(agg.sum_max));
  CHECK(d["totals"]["sum_min_sq"].get<std::string>() == primexp::to_string(agg.sum_min_sq));
  CHECK(d["totals"]["hist_max"]["1"].get<std::uint64_t>() == agg.hist_max[1]);
  REQUIRE(d["checkpoints"].size() == 4);
  CHECK(d["checkpoints"][0]["x"] == 10000);
  CHECK(d["checkpoints"][3]["x"] == 50000);
  CHECK(d["checkpoints"][3]["aggregate"]["sum_max"] == d["totals"]["sum_max"]);

  auto filtered = run_cli("scan --max-x 20000 --stats M --powers 1");
  REQUIRE(filtered.exit_code == 0);
  const json f = json::parse(filtered.out);
  CHECK(f["totals"].contains("sum_max"));
  CHECK_FALSE(f["totals"].contains("sum_max_sq"));
  CHECK_FALSE(f["totals"].contains("sum_min"));
  CHECK_FALSE(f["totals"].contains("hist_min"));
}

TEST_CASE("scan csv") {
  auto res = run_cli("scan --max-x 40000 --checkpoints geometric --format csv");
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.rfind("x,count,sum_max,sum_max_sq,sum_min,sum_min_sq\n", 0) == 0);
  CHECK(std::count(res.out.begin(), res.out.end(), '\n') == 4);
  CHECK(res.out.find("\n10000,10000,17039,42845,10315,11743\n") != std::string::npos);
}

TEST_CASE("scan state file resumes to identical bytes") {
  const auto state = scratch_dir() / "scan_state.json";
  fs::remove(state);
  auto full = run_cli("scan --max-x 160000 --state " + state.string());
  REQUIRE(full.exit_code == 0);
  REQUIRE(fs::exists(state));

  // rewind the state to x = 20000 as if the first run had been interrupted
  json st = json::parse(slurp(state));
  json trimmed = json::array();
  for (const auto& cp : st["checkpoints"])
    if (cp["x"].get<std::uint64_t>() <= 20000) trimmed.push_back(cp);
  st["checkpoints"] = trimmed;
  st["processed_up_to"] = 20000;
  std::ofstream(state) << st.dump();

  auto resumed = run_cli("scan --max-x 160000 --state " + state.string());
  REQUIRE(resumed.exit_code == 0);
  CHECK(resumed.out == full.out);

  // a state file for a different configuration is rejected, not misused
  auto mismatched = run_cli("scan --max-x 80000 --state " + state.string());
  CHECK(mismatched.exit_code == 2);
}

TEST_CASE("scan workers do not change output bytes") {
  auto one = run_cli("scan --max-x 200000 --checkpoints geometric --workers 1");
  auto eight = run_cli("scan --max-x 200000 --checkpoints geometric --workers 8 --segment-length 8192");
  REQUIRE(one.exit_code == 0);
  REQUIRE(eight.exit_code == 0);
  CHECK(one.out == eight.out);
}

TEST_CASE("counts command") {
  auto res = run_cli("counts --kind kfull --k 2 --x 100");
  REQUIRE(res.exit_code == 0);
  const json d = json::parse(res.out);
  CHECK(d["count"] == 14);
  CHECK(d["method"] == "enumeration");

  auto sieve = run_cli("counts --kind kfree --k 2 --x 99991 --method sieve");
  auto moebius = run_cli("counts --kind kfree --k 2 --x 99991 --method moebius");
  REQUIRE(sieve.exit_code == 0);
  REQUIRE(moebius.exit_code == 0);
  CHECK(json::parse(sieve.out)["count"] == json::parse(moebius.out)["count"]);

  CHECK(run_cli("counts --kind kfull --k 2 --x 100 --method sieve").exit_code == 2);
  CHECK(run_cli("counts --kind bogus --k 2 --x 100").exit_code == 2);
  CHECK(run_cli("counts --kind kfree --k 1 --x 100").exit_code == 2);
}

TEST_CASE("dist tables, moments and samples") {
  auto table = run_cli("dist --f f1 --kmax 3");
  REQUIRE(table.exit_code == 0);
  CHECK(table.out.rfind("k,pmf,cdf\n", 0) == 0);
  CHECK(table.out.find("1,0.60792710185402665,") != std::string::npos);
  CHECK(std::count(table.out.begin(), table.out.end(), '\n') == 4);

  auto moments = run_cli("dist --f f1 --moments --tol 1e-8");
  REQUIRE(moments.exit_code == 0);
  const json m = json::parse(moments.out);
  CHECK(m["mean"]["value"].get<double>() == doctest::Approx(1.7052111401).epsilon(1e-8));
  CHECK(m["mean"]["error_bound"].get<double>() <= 1e-8);
  CHECK(m["variance"]["value"].get<double>() == doctest::Approx(1.3935573680).epsilon(1e-7));

  auto s1 = run_cli("dist --f f1 --sample 1000 --seed 99");
  auto s2 = run_cli("dist --f f1 --sample 1000 --seed 99");
  auto s3 = run_cli("dist --f f1 --sample 1000 --seed 100");
  REQUIRE(s1.exit_code == 0);
  CHECK(std::count(s1.out.begin(), s1.out.end(), '\n') == 1000);
  CHECK(s1.out == s2.out);
  CHECK(s1.out != s3.out);

  auto benford = run_cli("dist --f f0:10 --kmax 9");
  REQUIRE(benford.exit_code == 0);
  CHECK(benford.out.find("1,0.30102999566398114,") != std::string::npos);

  CHECK(run_cli("dist --f nonsense").exit_code == 2);
  // moments whose certified bound cannot reach the requested tol must refuse
  auto refuse = run_cli("dist --f f2k:3 --moments --tol 1e-9");
  CHECK(refuse.exit_code == 2);
  CHECK(refuse.err.find("error:") != std::string::npos);
}

TEST_CASE("verify command baselines and exit codes") {
  const auto generous = scratch_dir() / "generous.json";
  {
    json b;
    for (const char* key :
         {"counts/kfree_k2/scaled", "counts/kfree_k3/scaled", "counts/kfree_k4/scaled",
          "counts/kfree_k5/scaled", "counts/kfull_k2/scaled", "counts/kfull_k3/scaled"})
      b[key] = 1e6;
    std::ofstream(generous) << b.dump();
  }
  auto ok = run_cli("verify --suite counts --max-x 20000 --baselines " + generous.string());
  REQUIRE(ok.exit_code == 0);
  const json rep = json::parse(ok.out);
  CHECK(rep["pass"] == true);
  CHECK(rep["suite"] == "counts");
  CHECK(rep["tables"].contains("counts/kfree_k2"));
  CHECK(ok.err.find("[PASS]") != std::string::npos);

  const auto empty = scratch_dir() / "empty.json";
  std::ofstream(empty) << "{}";
  auto fail = run_cli("verify --suite counts --max-x 20000 --baselines " + empty.string());
  CHECK(fail.exit_code == 1);
  CHECK(json::parse(fail.out)["pass"] == false);

  CHECK(run_cli("verify --suite bogus --max-x 20000").exit_code == 2);
  CHECK(run_cli("verify --max-x 20000 --baselines /nonexistent/path.json").exit_code == 2);

  const auto outdir = scratch_dir() / "report";
  const auto written = scratch_dir() / "measured.json";
  auto boot = run_cli("verify --suite counts --max-x 20000 --baselines " + empty.string() +
                      " --write-baselines " + written.string() + " --out " + outdir.string());
  CHECK(boot.exit_code == 0);  // fixed checks pass; baseline misses are expected in bootstrap
  REQUIRE(fs::exists(written));
  const json measured = json::parse(slurp(written));
  CHECK(measured.size() == 6);
  CHECK(measured.contains("counts/kfull_k2/scaled"));
  REQUIRE(fs::exists(outdir / "report.json"));
  REQUIRE(fs::exists(outdir / "counts_kfree_k2.csv"));
  const auto csv = slurp(outdir / "counts_kfree_k2.csv");
  CHECK(csv.rfind("x,empirical,predicted,residual,scaled_residual\n", 0) == 0);

  // the measured file immediately serves as a passing baseline set
  auto again = run_cli("verify --suite counts --max-x 20000 --baselines " + written.string());
  CHECK(again.exit_code == 0);
}

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("scan").exit_code == 2);
  CHECK(run_cli("scan --max-x 0").exit_code == 2);
  CHECK(run_cli("scan --max-x 1000 --stats Q").exit_code == 2);
  CHECK(run_cli("scan --max-x 1000 --powers 3").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("verify --help").exit_code == 0);
  auto bad = run_cli("scan --bogus-flag 1");
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("error:") != std::string::npos);
}
