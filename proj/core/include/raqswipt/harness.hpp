#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "raqswipt/benchmarks.hpp"
#include "raqswipt/config.hpp"
#include "raqswipt/rates.hpp"

namespace raq {

enum class ExperimentKind {
  kMseSweep,       // grid: pilot power (dBm)
  kBoundSweep,     // grid: antennas M
  kConvergence,    // grid unused
  kPowerSweep,     // grid: Ps_max (W)
  kReqRateSweep,   // grid: uplink rate floor (bit/s/Hz), all devices
  kDistanceSweep,  // grid: BS distance to region center (m)
};

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& text);

struct Experiment {
  ExperimentKind kind = ExperimentKind::kPowerSweep;
  std::vector<double> grid;
  int trials = 10000;   // Monte-Carlo channel draws
  int scenarios = 100;  // random device drops
  std::uint64_t seed = 1;
  std::vector<Scheme> schemes{Scheme::kMrcMrt};
  std::vector<BenchmarkKind> benchmarks = all_benchmarks();
  std::filesystem::path out_dir = "out";
  unsigned threads = 0;
  OptimizerOptions optimizer;

  /// trials >= 1, scenarios >= 1, grid strictly increasing (and nonempty
  /// for sweeps).
  void validate() const;
};

/// Kind-specific defaults (grid, trials, scenario count).
Experiment default_experiment(ExperimentKind kind);

/// [experiment] section: kind, grid, trials, scenarios, seed, schemes,
/// benchmarks, out. Missing keys take default_experiment(kind) values.
Experiment read_experiment(const KeyValueDocument& doc);
Experiment load_experiment(const std::filesystem::path& path);

/// Device drop `index` of the experiment seed; identical across grid points.
Geometry draw_geometry(const ConfigFile& config, std::uint64_t seed, int index);

/// FNV-1a over the serialized config, as 16 hex digits.
std::string config_hash(const ConfigFile& config);

struct RunSummary {
  std::vector<std::filesystem::path> files;
  int points = 0;
  int infeasible_points = 0;
};

/// Runs the experiment, writes one CSV per (scheme, benchmark) or per
/// receiver, plus manifest.txt, into out_dir. Outputs depend only on
/// (config, experiment); the manifest timestamp is the one exception.
RunSummary run_experiment(const Experiment& experiment, const ConfigFile& config);

}  // namespace raq
