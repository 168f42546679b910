#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "raqswipt/csv.hpp"
#include "raqswipt/errors.hpp"
#include "raqswipt/harness.hpp"

using namespace raq;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("raqswipt_unit_" + name);
  fs::remove_all(p);
  return p;
}

Experiment parse(const std::string& text) {
  std::istringstream in(text);
  return read_experiment(KeyValueDocument::parse(in));
}

}  // namespace

TEST_CASE("experiment parsing") {
  const Experiment e = parse("[experiment]\nkind = power\ngrid = 40, 50\nscenarios = 3\nschemes = mrc, zf\n"
                             "benchmarks = proposed\nout = somewhere\n");
  CHECK(e.kind == ExperimentKind::kPowerSweep);
  CHECK(e.grid.size() == 2);
  CHECK(e.scenarios == 3);
  CHECK(e.schemes.size() == 2);
  CHECK(e.benchmarks.size() == 1);
  CHECK(e.out_dir == fs::path("somewhere"));
  CHECK(parse("[experiment]\nkind = MseSweep\n").grid.size() == 9);

  CHECK_THROWS_AS(parse("[experiment]\nkind = power\ngrid = 50, 40\n"), ConfigError);
  CHECK_THROWS_AS(parse("[experiment]\nkind = power\ntrials = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[experiment]\nkind = warp\n"), ConfigError);
  CHECK_THROWS_AS(parse("[experiment]\nkind = power\nspeed = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\nM = 10\n"), ConfigError);
}

TEST_CASE("config hash follows the content") {
  ConfigFile a, b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.system.M = 99;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("device drops are shared across grid points") {
  ConfigFile a;
  ConfigFile b = a;
  b.system.ps_max = 70.0;
  const auto ga = draw_geometry(a, 4, 2), gb = draw_geometry(b, 4, 2);
  CHECK(ga.devices[0].x == gb.devices[0].x);
  CHECK(draw_geometry(a, 4, 3).devices[0].x != ga.devices[0].x);
}

TEST_CASE("sweep output layout and repeatability") {
  Experiment e = default_experiment(ExperimentKind::kPowerSweep);
  e.grid = {40.0, 60.0};
  e.scenarios = 2;
  e.benchmarks = {BenchmarkKind::kProposed, BenchmarkKind::kRfFullOpt};
  e.out_dir = scratch("sweep_a");
  const ConfigFile c;
  const RunSummary s = run_experiment(e, c);
  CHECK(s.points == 8);
  CHECK(fs::exists(e.out_dir / "manifest.txt"));
  const CsvTable t = read_csv(e.out_dir / "power_mrc_proposed.csv");
  CHECK(t.header == std::vector<std::string>{"grid", "mean", "se", "feasible", "total"});
  CHECK(t.rows.size() == 2);
  CHECK(slurp(e.out_dir / "power_mrc_proposed.csv").rfind("# schema=1\n", 0) == 0);

  Experiment again = e;
  again.out_dir = scratch("sweep_b");
  again.threads = 1;
  run_experiment(again, c);
  for (const auto& f : s.files) {
    CHECK(slurp(f) == slurp(again.out_dir / f.filename()));
  }
}

TEST_CASE("infeasible points are kept with a status") {
  Experiment e = default_experiment(ExperimentKind::kReqRateSweep);
  e.grid = {0.2, 50.0};  // 50 bit/s/Hz per device is out of reach
  e.scenarios = 1;
  e.benchmarks = {BenchmarkKind::kProposed};
  e.out_dir = scratch("reqrate");
  const RunSummary s = run_experiment(e, ConfigFile{});
  CHECK(s.infeasible_points == 1);
  const CsvTable pts = read_csv(e.out_dir / "reqrate_mrc_proposed_points.csv");
  REQUIRE(pts.rows.size() == 2);
  CHECK(pts.rows[1][pts.column("status")] == "infeasible");
  const CsvTable sum = read_csv(e.out_dir / "reqrate_mrc_proposed.csv");
  CHECK(sum.rows[1][sum.column("feasible")] == "0");
}

TEST_CASE("I/O errors name the path") {
  Experiment e = default_experiment(ExperimentKind::kMseSweep);
  e.out_dir = "/proc/raqswipt_cannot_write_here";
  e.trials = 10;
  try {
    run_experiment(e, ConfigFile{});
    FAIL("expected an exception");
  } catch (const std::exception& ex) {
    CHECK(std::string(ex.what()).find("/proc/raqswipt_cannot_write_here") != std::string::npos);
  }
}
