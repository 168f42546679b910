#pragma once

#include <optional>
#include <string>
#include <vector>

#include "raqswipt/optimizer.hpp"

namespace raq {

enum class BenchmarkKind {
  kProposed,       // RAQR, full joint design
  kEqualUlPowers,  // RAQR, p^p_k = p^d_k
  kRfFullOpt,      // RF receiver, battery-powered uplink
  kRfEqualUl,      // RF receiver, battery-powered uplink, p^p_k = p^d_k
};

std::string to_string(BenchmarkKind kind);
BenchmarkKind parse_benchmark(const std::string& text);
std::vector<BenchmarkKind> all_benchmarks();

struct BenchmarkSpec {
  BenchmarkKind kind = BenchmarkKind::kProposed;
  /// Uplink receiver override; defaults to the scenario's RF chain for RF
  /// kinds and to the scenario receiver otherwise.
  std::optional<FrontEnd> frontend;
  /// Uplink budget of the RF kinds (W); <= 0 takes system.battery_dbm.
  double battery_w = 0.0;
};

struct BenchmarkResult {
  BenchmarkKind kind = BenchmarkKind::kProposed;
  OptStatus status = OptStatus::kInfeasible;
  Allocation allocation;
  LinkEvaluation evaluation;
  RateReport report;  // closed-form columns only
  double sum_rate = 0.0;
  double max_violation = 0.0;
  int outer_passes = 0;
  int inner_iterations = 0;
  bool monotone = true;
};

/// The scenario actually optimized by `spec` (receiver swapped for RF kinds).
Scenario benchmark_scenario(const BenchmarkSpec& spec, const Scenario& sc);
DesignVariant benchmark_variant(const BenchmarkSpec& spec, const Scenario& sc);

/// Alternating design under the benchmark's restrictions. `warm_start`, when
/// given, must be feasible for that design.
BenchmarkResult run_benchmark(const BenchmarkSpec& spec, const Scenario& sc, Scheme scheme,
                              const OptimizerOptions& opt = {},
                              const Allocation* warm_start = nullptr);

/// All four designs on one scenario. The proposed design is warm-started
/// from the equal-power solution, so it never does worse.
std::vector<BenchmarkResult> run_all_benchmarks(const Scenario& sc, Scheme scheme,
                                                const OptimizerOptions& opt = {});

}  // namespace raq
