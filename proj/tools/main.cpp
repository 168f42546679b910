// raqswipt: experiment runner for the RAQR SWIPT simulator.
#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "raqswipt/benchmarks.hpp"
#include "raqswipt/config.hpp"
#include "raqswipt/csv.hpp"
#include "raqswipt/errors.hpp"
#include "raqswipt/harness.hpp"
#include "raqswipt/monte_carlo.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::string config;
  std::string experiment;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> scenarios;
  std::string out;
  std::string scheme;
  int scenario_index = 0;
  bool quiet = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

raq::ConfigFile load_config(const Flags& f) {
  if (f.config.empty()) return raq::ConfigFile{};
  if (!fs::exists(f.config)) throw UsageError("config file not found: " + f.config);
  return raq::load_config(f.config);
}

// Experiment from --experiment (or the kind's defaults), then flag overrides.
raq::Experiment make_experiment(const Flags& f, raq::ExperimentKind fallback, bool require_file) {
  raq::Experiment ex;
  if (!f.experiment.empty()) {
    if (!fs::exists(f.experiment)) throw UsageError("experiment file not found: " + f.experiment);
    ex = raq::load_experiment(f.experiment);
  } else if (require_file) {
    throw UsageError("sweep needs --experiment");
  } else {
    ex = raq::default_experiment(fallback);
  }
  if (f.seed) ex.seed = *f.seed;
  if (f.trials) ex.trials = *f.trials;
  if (f.scenarios) ex.scenarios = *f.scenarios;
  if (!f.out.empty()) ex.out_dir = f.out;
  if (!f.scheme.empty()) ex.schemes = {raq::parse_scheme(f.scheme)};
  ex.validate();
  return ex;
}

int run_experiment_command(const Flags& f, raq::ExperimentKind kind, bool require_file) {
  const raq::ConfigFile config = load_config(f);
  const raq::Experiment ex = make_experiment(f, kind, require_file);
  if (!require_file && ex.kind != kind) {
    throw UsageError("experiment kind '" + raq::to_string(ex.kind) + "' does not match this subcommand");
  }
  const raq::RunSummary summary = raq::run_experiment(ex, config);
  if (!f.quiet) {
    std::cout << raq::to_string(ex.kind) << ": " << summary.points << " points, "
              << summary.infeasible_points << " infeasible\n";
    for (const auto& file : summary.files) std::cout << "  " << file.string() << '\n';
  }
  return kExitOk;
}

raq::Scenario single_scenario(const Flags& f, const raq::ConfigFile& config) {
  raq::ConfigFile c = config;
  c.system.broadcast_per_device();
  const raq::Geometry geo = raq::draw_geometry(c, f.seed.value_or(1), f.scenario_index);
  return raq::make_scenario(c, geo, raq::ReceiverKind::kRaqr);
}

fs::path out_dir(const Flags& f) {
  const fs::path dir = f.out.empty() ? fs::path("out") : fs::path(f.out);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  return out;
}

int optimize_command(const Flags& f) {
  const raq::Scenario sc = single_scenario(f, load_config(f));
  const raq::Scheme scheme = f.scheme.empty() ? raq::Scheme::kMrcMrt : raq::parse_scheme(f.scheme);
  const raq::AlternateResult alt = raq::alternate(sc, scheme);
  const auto& r = alt.result;
  const fs::path dir = out_dir(f);
  const std::string tag = raq::to_string(scheme);
  {
    auto out = open_out(dir / ("trace_" + tag + ".csv"));
    out << "# schema=" << raq::kCsvSchema << '\n';
    raq::write_trace_csv(out, r.trace);
  }
  {
    auto out = open_out(dir / ("allocation_" + tag + ".csv"));
    out << "# schema=" << raq::kCsvSchema << '\n';
    raq::write_allocation_csv(out, r.allocation);
  }
  if (!f.quiet) {
    std::cout << "status " << raq::to_string(r.status) << ", sum rate " << r.sum_rate << ", "
              << r.trace.iterations << " inner iterations, " << alt.passes << " outer passes, "
              << "T_U=" << r.allocation.T_U << " T_D=" << r.allocation.T_D
              << ", max violation " << r.max_violation << '\n';
    if (!r.message.empty()) std::cout << r.message << '\n';
  }
  return r.status == raq::OptStatus::kInfeasible ? kExitInfeasible : kExitOk;
}

int bench_command(const Flags& f) {
  const raq::Scenario sc = single_scenario(f, load_config(f));
  const raq::Scheme scheme = f.scheme.empty() ? raq::Scheme::kMrcMrt : raq::parse_scheme(f.scheme);
  const auto results = raq::run_all_benchmarks(sc, scheme);
  const fs::path dir = out_dir(f);
  raq::CsvWriter w(dir / ("bench_" + raq::to_string(scheme) + ".csv"),
                   {"benchmark", "status", "sum_rate", "T_U", "T_D", "max_violation", "outer_passes",
                    "inner_iterations"});
  bool any_infeasible = false;
  for (const auto& b : results) {
    any_infeasible |= b.status == raq::OptStatus::kInfeasible;
    w.field(raq::to_string(b.kind)).field(raq::to_string(b.status)).field(b.sum_rate);
    w.field(b.allocation.T_U).field(b.allocation.T_D).field(b.max_violation);
    w.field(b.outer_passes).field(b.inner_iterations);
    w.end_row();
    if (!f.quiet) {
      std::cout << raq::to_string(b.kind) << ": " << raq::to_string(b.status) << ", sum rate "
                << b.sum_rate << '\n';
    }
  }
  return any_infeasible ? kExitInfeasible : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RAQR SWIPT multi-user MIMO simulator and optimizer"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config, "Scenario config file (defaults to the built-in parameters)");
    sub->add_option("--seed", f.seed, "Seed for device drops and Monte-Carlo draws");
    sub->add_option("--out", f.out, "Output directory");
    sub->add_option("--scheme", f.scheme, "Linear processing: mrc or zf")
        ->check(CLI::IsMember({"mrc", "zf"}));
    sub->add_flag("--quiet", f.quiet, "Suppress the summary");
  };
  auto experiment_flags = [&f](CLI::App* sub) {
    sub->add_option("--experiment", f.experiment, "Experiment file with an [experiment] section");
    sub->add_option("--trials", f.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    sub->add_option("--scenarios", f.scenarios, "Random device drops")->check(CLI::PositiveNumber);
  };

  auto* estimate = app.add_subcommand("estimate", "Channel-estimation MSE versus pilot power");
  auto* bounds = app.add_subcommand("bounds", "Closed-form bounds against Monte-Carlo versus M");
  auto* optimize = app.add_subcommand("optimize", "Optimize one device drop");
  auto* sweep = app.add_subcommand("sweep", "Run a sweep or convergence experiment file");
  auto* bench = app.add_subcommand("bench", "Compare the four designs on one device drop");
  for (auto* sub : {estimate, bounds, optimize, sweep, bench}) common(sub);
  for (auto* sub : {estimate, bounds, sweep}) experiment_flags(sub);
  for (auto* sub : {optimize, bench}) {
    sub->add_option("--scenario", f.scenario_index, "Device drop index")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*estimate) return run_experiment_command(f, raq::ExperimentKind::kMseSweep, false);
    if (*bounds) return run_experiment_command(f, raq::ExperimentKind::kBoundSweep, false);
    if (*sweep) return run_experiment_command(f, raq::ExperimentKind::kPowerSweep, true);
    if (*optimize) return optimize_command(f);
    if (*bench) return bench_command(f);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const raq::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return kExitUsage;
}
