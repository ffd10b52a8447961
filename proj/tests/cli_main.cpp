// Exercises the nddsuff binary end to end: exit-status contract
// (0 converged / 2 not converged / 1 error), file outputs, determinism.
// argv[1] is the path to the binary under test.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "ndd/csv.hpp"

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
  std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

int run(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -2;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: ndd_cli_tests <path-to-nddsuff>\n";
    return 2;
  }
  const std::string bin = argv[1];
  const fs::path work = fs::temp_directory_path() / "ndd_cli_work";
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string quiet = " > /dev/null 2> " + (work / "stderr.txt").string();

  // --- generate: determinism and round-trip
  const fs::path data = work / "data.csv";
  {
    // statistically identical trips so every variable converges quickly
    std::ofstream scenario(work / "small.json");
    scenario << R"({"drivers":[{"driver_id":"d01",
      "params":{"c":4.0,"r":0.5,"l":1.0,"reaction_time_s":0.8},
      "trips":[)";
    for (int i = 0; i < 8; ++i) {
      if (i) scenario << ",";
      scenario << R"({"trip_id":"t)" << i << R"(","duration_s":400,
        "initial_speed":21,"initial_spacing":55,
        "noise":{"std_mps2":0.25,"tau_s":0.5},
        "lead":{"start_speed":21,"segments":[
          {"kind":"constant","duration_s":10},
          {"kind":"sine","duration_s":390,"amplitude":)"
               << (1.2 + 0.2 * i) << R"(,"period_s":)" << (25 + 4 * i)
               << "}]}}";
    }
    scenario << "]}]}";
  }
  check(run(bin + " generate --scenario " + (work / "small.json").string() +
            " --seed 9 --out " + data.string() + quiet) == 0,
        "generate exits 0");
  check(fs::exists(data), "generate writes the CSV");

  // the built-in scenario parses cleanly too
  const fs::path bundled = work / "bundled.csv";
  check(run(bin + " generate --seed 1 --out " + bundled.string() + quiet) == 0,
        "generate with the built-in scenario exits 0");
  {
    const auto parsed = ndd::csv::parse_log_file(bundled.string());
    check(parsed.row_errors.empty(), "built-in scenario parses with zero row errors");
    check(parsed.records.size() >= 100000, "built-in scenario is full-sized");
  }

  const fs::path data2 = work / "data2.csv";
  run(bin + " generate --scenario " + (work / "small.json").string() +
      " --seed 9 --out " + data2.string() + quiet);
  check(slurp(data) == slurp(data2), "same seed, byte-identical output");

  const fs::path data3 = work / "data3.csv";
  run(bin + " generate --scenario " + (work / "small.json").string() +
      " --seed 10 --out " + data3.string() + quiet);
  check(slurp(data) != slurp(data3), "different seed, different output");

  {
    const auto parsed = ndd::csv::parse_log_file(data.string());
    check(parsed.row_errors.empty(), "generated file has zero row errors");
    check(parsed.records.size() == 8 * 4000, "expected sample count");
  }

  // --- analyze: converged path (coarse threshold keeps runtime modest)
  const fs::path out_a = work / "out_a";
  const int code_a = run(bin + " analyze " + data.string() +
                         " --epsilon 1e-2 --out " + out_a.string() + quiet);
  check(code_a == 0, "analyze exits 0 when every variable converges");
  check(fs::exists(out_a / "report.json"), "analyze writes report.json");
  for (const char* var : {"v_e", "a_e", "delta_v", "delta_d"}) {
    check(fs::exists(out_a / (std::string("trace_") + var + ".csv")),
          std::string("analyze writes trace_") + var + ".csv");
  }

  // determinism across repeated runs
  const fs::path out_b = work / "out_b";
  run(bin + " analyze " + data.string() + " --epsilon 1e-2 --out " +
      out_b.string() + quiet);
  check(slurp(out_a / "report.json") == slurp(out_b / "report.json"),
        "reports from identical runs are byte-identical");

  // --- analyze: not-converged path
  const int code_nc = run(bin + " analyze " + data.string() +
                          " --epsilon 1e-18 --out " +
                          (work / "out_nc").string() + quiet);
  check(code_nc == 2, "analyze exits 2 when not converged");

  // --- analyze: error paths
  {
    std::ofstream tiny(work / "tiny.csv");
    tiny << "timestamp,driver_id,trip_id,v_e,a_e,delta_v,delta_d,lane_change,cut_in\n";
    for (int i = 0; i < 600; ++i) {
      tiny << i * 0.1 << ",d1,t1,20,0,0,30,0,0\n";
    }
  }
  const int code_small = run(bin + " analyze " + (work / "tiny.csv").string() +
                             " --out " + (work / "out_small").string() + quiet);
  check(code_small == 1, "too little data exits 1");
  check(slurp(work / "stderr.txt").find("6000") != std::string::npos,
        "error names the required minimum");

  check(run(bin + " analyze " + (work / "absent.csv").string() + quiet) == 1,
        "missing input exits 1");
  check(run(bin + " analyze" + quiet) == 1, "missing argument exits 1");
  check(run(bin + " analyze " + data.string() + " --variables bogus --out " +
            (work / "out_bad").string() + quiet) == 1,
        "unknown variable exits 1");

  // --- analyze: multivariate mode produces a joint trace
  const fs::path out_m = work / "out_m";
  const int code_m =
      run(bin + " analyze " + data.string() +
          " --mode multivariate --epsilon 1e-2 --out " + out_m.string() + quiet);
  check(code_m == 0 || code_m == 2, "multivariate analyze completes");
  check(fs::exists(out_m / "trace_joint.csv"), "joint trace file exists");
  check(slurp(out_m / "report.json").find("\"joint\"") != std::string::npos,
        "report carries the joint entry");

  // --- sweep
  const fs::path out_s = work / "out_s";
  const int code_s =
      run(bin + " sweep " + data.string() +
          " --epsilon 1e-2,5e-3,1e-3 --out " + out_s.string() + quiet);
  check(code_s == 0, "sweep exits 0 when all thresholds converge");
  check(fs::exists(out_s / "sweep.json"), "sweep writes sweep.json");
  check(fs::exists(out_s / "sweep.csv"), "sweep writes sweep.csv");

  check(run(bin + " sweep " + data.string() + quiet) == 1,
        "sweep without thresholds is a usage error");

  // --- two drivers: per-driver analysis by default, pooled on request
  const fs::path two_drivers = work / "two_drivers.csv";
  {
    auto a = ndd::csv::parse_log_file(data.string());
    auto b = ndd::csv::parse_log_file(data3.string());
    for (auto& r : b.records) r.driver_id = "d02";
    a.records.insert(a.records.end(), b.records.begin(), b.records.end());
    std::ofstream out(two_drivers);
    ndd::csv::write_log(out, a.records);
  }
  const fs::path out_two = work / "out_two";
  run(bin + " analyze " + two_drivers.string() + " --epsilon 1e-2 --out " +
      out_two.string() + quiet);
  {
    const std::string rep = slurp(out_two / "report.json");
    check(rep.find("\"unit\": \"d01\"") != std::string::npos &&
              rep.find("\"unit\": \"d02\"") != std::string::npos,
          "per-driver analysis reports each driver");
    check(fs::exists(out_two / "trace_d01_v_e.csv") &&
              fs::exists(out_two / "trace_d02_v_e.csv"),
          "multi-driver trace files carry the driver id");
  }
  const fs::path out_pool = work / "out_pool";
  run(bin + " analyze " + two_drivers.string() +
      " --pool-drivers --epsilon 1e-2 --out " + out_pool.string() + quiet);
  {
    const std::string rep = slurp(out_pool / "report.json");
    check(rep.find("\"unit\": \"pooled\"") != std::string::npos,
          "--pool-drivers analyzes one combined unit");
    check(fs::exists(out_pool / "trace_v_e.csv"),
          "pooled run uses unprefixed trace names");
  }

  // row errors are reported with their line, analysis continues
  {
    std::ofstream bad(work / "bad_rows.csv", std::ios::app);
    bad << slurp(data);
    bad << "0.05,d1,t1,oops,0,0,30,0,0\n";
  }
  run(bin + " analyze " + (work / "bad_rows.csv").string() +
      " --epsilon 1e-2 --out " + (work / "out_bad_rows").string() + quiet);
  check(slurp(work / "stderr.txt").find("oops") != std::string::npos,
        "malformed row reported on stderr");
  check(slurp(work / "out_bad_rows" / "report.json").find("\"row_errors\": 1") !=
            std::string::npos,
        "row error count lands in the report");

  fs::remove_all(work);
  if (g_failures) {
    std::printf("%d CLI check(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all CLI checks passed\n");
  return 0;
}
