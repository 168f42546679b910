#include "raqswipt/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "raqswipt/channel.hpp"
#include "raqswipt/csv.hpp"
#include "raqswipt/errors.hpp"
#include "raqswipt/monte_carlo.hpp"
#include "raqswipt/parallel.hpp"
#include "raqswipt/rng.hpp"
#include "raqswipt/stats.hpp"
#include "raqswipt/units.hpp"

namespace raq {

namespace fs = std::filesystem;

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kMseSweep: return "mse";
    case ExperimentKind::kBoundSweep: return "bounds";
    case ExperimentKind::kConvergence: return "convergence";
    case ExperimentKind::kPowerSweep: return "power";
    case ExperimentKind::kReqRateSweep: return "reqrate";
    case ExperimentKind::kDistanceSweep: return "distance";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& text) {
  static const std::map<std::string, ExperimentKind> names{
      {"mse", ExperimentKind::kMseSweep},           {"MseSweep", ExperimentKind::kMseSweep},
      {"bounds", ExperimentKind::kBoundSweep},      {"BoundSweep", ExperimentKind::kBoundSweep},
      {"convergence", ExperimentKind::kConvergence}, {"Convergence", ExperimentKind::kConvergence},
      {"power", ExperimentKind::kPowerSweep},       {"PowerSweep", ExperimentKind::kPowerSweep},
      {"reqrate", ExperimentKind::kReqRateSweep},   {"ReqRateSweep", ExperimentKind::kReqRateSweep},
      {"distance", ExperimentKind::kDistanceSweep}, {"DistanceSweep", ExperimentKind::kDistanceSweep},
  };
  const auto it = names.find(text);
  if (it == names.end()) throw ConfigError("unknown experiment kind '" + text + "'");
  return it->second;
}

void Experiment::validate() const {
  if (trials < 1) throw ConfigError("experiment: trials must be >= 1");
  if (scenarios < 1) throw ConfigError("experiment: scenarios must be >= 1");
  if (kind != ExperimentKind::kConvergence && grid.empty()) throw ConfigError("experiment: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError("experiment: grid must be strictly increasing");
  }
  if (schemes.empty()) throw ConfigError("experiment: no schemes");
}

Experiment default_experiment(ExperimentKind kind) {
  Experiment e;
  e.kind = kind;
  switch (kind) {
    case ExperimentKind::kMseSweep:
      e.grid = {-40, -35, -30, -25, -20, -15, -10, -5, 0};
      e.scenarios = 1;
      break;
    case ExperimentKind::kBoundSweep:
      e.grid = {25, 50, 100, 200};
      e.scenarios = 1;
      break;
    case ExperimentKind::kConvergence:
      e.scenarios = 10;
      e.schemes = {Scheme::kMrcMrt, Scheme::kZf};
      break;
    case ExperimentKind::kPowerSweep:
      e.grid = {40, 50, 60, 70};
      break;
    case ExperimentKind::kReqRateSweep:
      e.grid = {0.1, 0.2, 0.3, 0.4, 0.5};
      break;
    case ExperimentKind::kDistanceSweep:
      e.grid = {100, 150, 200, 250};
      break;
  }
  return e;
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

Experiment read_experiment(const KeyValueDocument& doc) {
  if (!doc.has_section("experiment")) throw ConfigError("missing [experiment] section");
  SectionReader r(doc, "experiment");
  std::string kind;
  r.read("kind", kind);
  if (kind.empty()) throw ConfigError("[experiment] needs a kind");
  Experiment e = default_experiment(parse_experiment_kind(kind));
  r.read("grid", e.grid);
  r.read("trials", e.trials);
  r.read("scenarios", e.scenarios);
  r.read("seed", e.seed);
  std::string schemes, benchmarks, out;
  r.read("schemes", schemes);
  r.read("benchmarks", benchmarks);
  r.read("out", out);
  r.finish();
  if (!schemes.empty()) {
    e.schemes.clear();
    for (const auto& s : split_list(schemes)) e.schemes.push_back(parse_scheme(s));
  }
  if (!benchmarks.empty()) {
    e.benchmarks.clear();
    for (const auto& b : split_list(benchmarks)) e.benchmarks.push_back(parse_benchmark(b));
  }
  if (!out.empty()) e.out_dir = out;
  e.validate();
  return e;
}

Experiment load_experiment(const fs::path& path) { return read_experiment(KeyValueDocument::load(path)); }

Geometry draw_geometry(const ConfigFile& config, std::uint64_t seed, int index) {
  Rng rng = make_stream(derive_seed(seed, 0x6e0), static_cast<std::uint64_t>(index));
  return sample_geometry(rng, config.system.K, config.geometry);
}

std::string config_hash(const ConfigFile& config) {
  const std::string text = write_config(config);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct Context {
  const Experiment& ex;
  const ConfigFile& config;
  RunSummary& summary;

  fs::path file(const std::string& name) {
    const fs::path p = ex.out_dir / name;
    summary.files.push_back(p);
    return p;
  }
};

ConfigFile prepared(ConfigFile c) {
  c.system.broadcast_per_device();
  c.validate();
  return c;
}

void run_mse(Context& ctx) {
  const ConfigFile cfg = prepared(ctx.config);
  const Geometry geo = draw_geometry(cfg, ctx.ex.seed, 0);
  const std::vector<ReceiverKind> receivers{ReceiverKind::kRaqr, ReceiverKind::kRf};
  const std::size_t G = ctx.ex.grid.size();
  std::vector<EstimationMcResult> results(G * receivers.size());
  parallel_for(results.size(), ctx.ex.threads, [&](std::size_t task) {
    const Scenario sc = make_scenario(cfg, geo, receivers[task / G]);
    const std::vector<double> pilot(sc.K(), dbm_to_watt(ctx.ex.grid[task % G]));
    McOptions mo;
    mo.trials = ctx.ex.trials;
    mo.seed = derive_seed(ctx.ex.seed, task);
    mo.threads = 1;
    results[task] = mc_channel_estimation(sc, pilot, mo);
  });
  for (std::size_t r = 0; r < receivers.size(); ++r) {
    const Scenario sc = make_scenario(cfg, geo, receivers[r]);
    CsvWriter w(ctx.file("mse_" + to_string(receivers[r]) + ".csv"),
                {"pilot_dbm", "k", "beta", "nmse_closed", "nmse_mc", "nmse_se", "mse_closed", "mse_mc",
                 "mse_se", "status"});
    for (std::size_t g = 0; g < G; ++g) {
      const auto& res = results[r * G + g];
      const double p = dbm_to_watt(ctx.ex.grid[g]);
      for (int k = 0; k < sc.K(); ++k) {
        const double gamma = equivalent_snr(sc.beta[k], p, sc.receiver);
        w.field(ctx.ex.grid[g]).field(k).field(sc.beta[k]);
        w.field(nmse(gamma, sc.system.tau)).field(res.nmse[k]).field(res.nmse_se[k]);
        w.field(error_variance(sc.beta[k], p, sc.system.tau, sc.receiver)).field(res.mse[k]).field(res.mse_se[k]);
        w.field(ctx.ex.trials < kMinAcceptanceTrials ? "small_ensemble" : "ok");
        w.end_row();
      }
      ++ctx.summary.points;
    }
  }
}

void run_bounds(Context& ctx) {
  const ConfigFile base = prepared(ctx.config);
  const Geometry geo = draw_geometry(base, ctx.ex.seed, 0);
  const std::size_t G = ctx.ex.grid.size();
  for (std::size_t si = 0; si < ctx.ex.schemes.size(); ++si) {
    const Scheme scheme = ctx.ex.schemes[si];
    struct Point {
      bool ok = false;
      LinkEvaluation ev;
      LinkMcResult mc;
    };
    std::vector<Point> pts(G);
    parallel_for(G, ctx.ex.threads, [&](std::size_t g) {
      ConfigFile cfg = base;
      cfg.system.M = static_cast<int>(ctx.ex.grid[g]);
      if (cfg.system.M <= cfg.system.K) return;
      const Scenario sc = make_scenario(cfg, geo, ReceiverKind::kRaqr);
      const Allocation a = initial_allocation(sc, scheme, {});
      McOptions mo;
      mo.trials = ctx.ex.trials;
      mo.seed = derive_seed(ctx.ex.seed, si * G + g);
      mo.threads = 1;
      pts[g].ev = evaluate(sc, a, scheme);
      pts[g].mc = mc_link(scheme, sc, a, mo);
      pts[g].ok = true;
    });
    CsvWriter w(ctx.file("bounds_" + to_string(scheme) + ".csv"),
                {"M", "k", "rate_u_lb", "rate_u_mc", "rate_u_se", "rate_d_lb", "rate_d_mc", "rate_d_se",
                 "energy_lb", "energy_mc", "energy_se", "ergodic_u", "ergodic_u_se", "ergodic_d",
                 "ergodic_d_se", "status"});
    for (std::size_t g = 0; g < G; ++g) {
      ++ctx.summary.points;
      if (!pts[g].ok) {
        ++ctx.summary.infeasible_points;
        w.field(ctx.ex.grid[g]).field(-1);
        for (int i = 0; i < 13; ++i) w.field(std::nan(""));
        w.field("skipped_m_le_k");
        w.end_row();
        continue;
      }
      const auto& ev = pts[g].ev;
      const auto& u = pts[g].mc.uplink;
      const auto& d = pts[g].mc.downlink;
      for (std::size_t k = 0; k < ev.rate_u.size(); ++k) {
        w.field(ctx.ex.grid[g]).field(static_cast<int>(k));
        w.field(ev.rate_u[k]).field(u.rate[k]).field(u.rate_se[k]);
        w.field(ev.rate_d[k]).field(d.rate[k]).field(d.rate_se[k]);
        w.field(ev.energy[k]).field(d.energy[k]).field(d.energy_se[k]);
        w.field(u.ergodic_rate[k]).field(u.ergodic_se[k]).field(d.ergodic_rate[k]).field(d.ergodic_se[k]);
        w.field(u.small_ensemble ? "small_ensemble" : "ok");
        w.end_row();
      }
    }
  }
}

void run_convergence(Context& ctx) {
  const ConfigFile cfg = prepared(ctx.config);
  const auto S = static_cast<std::size_t>(ctx.ex.scenarios);
  for (const Scheme scheme : ctx.ex.schemes) {
    std::vector<OptimizeResult> res(S);
    parallel_for(S, ctx.ex.threads, [&](std::size_t s) {
      const Scenario sc = make_scenario(cfg, draw_geometry(cfg, ctx.ex.seed, static_cast<int>(s)),
                                        ReceiverKind::kRaqr);
      res[s] = solve_powers(scheme, sc, initial_allocation(sc, scheme, {}), {}, ctx.ex.optimizer);
    });
    CsvWriter w(ctx.file("convergence_" + to_string(scheme) + ".csv"),
                {"scenario", "iteration", "objective", "max_residual", "chain_residual", "anchor_norm",
                 "newton_steps", "status"});
    for (std::size_t s = 0; s < S; ++s) {
      ++ctx.summary.points;
      if (res[s].status == OptStatus::kInfeasible) ++ctx.summary.infeasible_points;
      for (const auto& r : res[s].trace.records) {
        w.field(static_cast<int>(s)).field(r.iteration).field(r.objective).field(r.max_residual);
        w.field(r.chain_residual).field(r.anchor_norm).field(r.newton_steps);
        w.field(to_string(res[s].status));
        w.end_row();
      }
    }
  }
}

// One grid value applied to a copy of the config.
ConfigFile apply_grid(ConfigFile c, ExperimentKind kind, double value) {
  switch (kind) {
    case ExperimentKind::kPowerSweep: c.system.ps_max = value; break;
    case ExperimentKind::kReqRateSweep: c.system.rreq_u.assign(c.system.K, value); break;
    case ExperimentKind::kDistanceSweep: c.geometry.bs_distance = value; break;
    default: break;
  }
  return c;
}

void run_sweep(Context& ctx) {
  const ConfigFile base = prepared(ctx.config);
  const std::size_t G = ctx.ex.grid.size();
  const auto S = static_cast<std::size_t>(ctx.ex.scenarios);
  const std::string prefix = to_string(ctx.ex.kind);
  for (const Scheme scheme : ctx.ex.schemes) {
    std::vector<std::vector<BenchmarkResult>> res(G * S);
    parallel_for(G * S, ctx.ex.threads, [&](std::size_t task) {
      const std::size_t g = task / S;
      const int s = static_cast<int>(task % S);
      const ConfigFile cfg = prepared(apply_grid(base, ctx.ex.kind, ctx.ex.grid[g]));
      const Scenario sc = make_scenario(cfg, draw_geometry(cfg, ctx.ex.seed, s), ReceiverKind::kRaqr);
      res[task] = run_all_benchmarks(sc, scheme, ctx.ex.optimizer);
    });
    for (const BenchmarkKind kind : ctx.ex.benchmarks) {
      const std::string stem = prefix + "_" + to_string(scheme) + "_" + to_string(kind);
      CsvWriter summary(ctx.file(stem + ".csv"), {"grid", "mean", "se", "feasible", "total"});
      CsvWriter points(ctx.file(stem + "_points.csv"),
                       {"grid", "scenario", "status", "sum_rate", "T_U", "T_D", "max_violation",
                        "outer_passes", "inner_iterations"});
      for (std::size_t g = 0; g < G; ++g) {
        RunningStats stats;
        for (std::size_t s = 0; s < S; ++s) {
          const auto& all = res[g * S + s];
          const auto it = std::find_if(all.begin(), all.end(), [kind](const BenchmarkResult& b) { return b.kind == kind; });
          const BenchmarkResult& b = *it;
          const bool ok = b.status != OptStatus::kInfeasible;
          ++ctx.summary.points;
          if (!ok) ++ctx.summary.infeasible_points;
          if (ok) stats.add(b.sum_rate);
          points.field(ctx.ex.grid[g]).field(static_cast<int>(s)).field(to_string(b.status));
          points.field(ok ? b.sum_rate : std::nan("")).field(b.allocation.T_U).field(b.allocation.T_D);
          points.field(b.max_violation).field(b.outer_passes).field(b.inner_iterations);
          points.end_row();
        }
        summary.field(ctx.ex.grid[g]).field(stats.count() > 0 ? stats.mean() : std::nan(""));
        summary.field(stats.count() > 1 ? stats.sem() : std::nan(""));
        summary.field(static_cast<long long>(stats.count())).field(static_cast<long long>(S));
        summary.end_row();
      }
    }
  }
}

void write_manifest(Context& ctx) {
  const fs::path p = ctx.ex.out_dir / "manifest.txt";
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  out << "version = raqswipt 0.1.0\n";
  out << "experiment = " << to_string(ctx.ex.kind) << '\n';
  out << "seed = " << ctx.ex.seed << '\n';
  out << "trials = " << ctx.ex.trials << '\n';
  out << "scenarios = " << ctx.ex.scenarios << '\n';
  out << "grid =";
  for (double g : ctx.ex.grid) out << ' ' << csv_number(g);
  out << "\nschemes =";
  for (auto s : ctx.ex.schemes) out << ' ' << to_string(s);
  out << "\nconfig_hash = " << config_hash(ctx.config) << '\n';
  out << "csv_schema = " << kCsvSchema << '\n';
  for (const auto& f : ctx.summary.files) out << "file = " << f.filename().string() << '\n';
  out << "timestamp = " << stamp << '\n';
}

}  // namespace

RunSummary run_experiment(const Experiment& ex, const ConfigFile& config) {
  ex.validate();
  config.validate();
  std::error_code ec;
  fs::create_directories(ex.out_dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + ex.out_dir.string() + "': " + ec.message());
  RunSummary summary;
  Context ctx{ex, config, summary};
  switch (ex.kind) {
    case ExperimentKind::kMseSweep: run_mse(ctx); break;
    case ExperimentKind::kBoundSweep: run_bounds(ctx); break;
    case ExperimentKind::kConvergence: run_convergence(ctx); break;
    case ExperimentKind::kPowerSweep:
    case ExperimentKind::kReqRateSweep:
    case ExperimentKind::kDistanceSweep: run_sweep(ctx); break;
  }
  write_manifest(ctx);
  return summary;
}

}  // namespace raq
