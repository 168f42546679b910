#pragma once

#include <cstdint>
#include <vector>

#include "raqswipt/rates.hpp"
#include "raqswipt/scenario.hpp"

namespace raq {

struct McOptions {
  int trials = 10000;
  std::uint64_t seed = 1;
  /// Trials are split into this many batches, each with its own RNG stream.
  /// Standard errors of ratio-type estimates come from the spread of the
  /// per-batch estimates.
  int batches = 20;
  unsigned threads = 0;  // 0: RAQ_SWIPT_THREADS or hardware concurrency
};

/// Ensembles below this size are flagged as too small for acceptance use.
inline constexpr int kMinAcceptanceTrials = 1000;

struct UplinkMcResult {
  // Use-and-then-forget bound formed from sample means of the signal,
  // leakage, interference and noise powers.
  std::vector<double> sinr;
  std::vector<double> rate;
  std::vector<double> rate_se;
  // Ergodic rate E{log2(1 + instantaneous SINR)}, for context.
  std::vector<double> ergodic_rate;
  std::vector<double> ergodic_se;
  bool small_ensemble = false;
};

struct DownlinkMcResult {
  std::vector<double> sinr;
  std::vector<double> rate;
  std::vector<double> rate_se;
  std::vector<double> energy;
  std::vector<double> energy_se;
  std::vector<double> ergodic_rate;
  std::vector<double> ergodic_se;
  bool small_ensemble = false;
};

struct EstimationMcResult {
  std::vector<double> mse;          // per-entry E|h - h_hat|^2
  std::vector<double> mse_se;
  std::vector<double> nmse;         // mse / beta
  std::vector<double> nmse_se;
  std::vector<double> estimate_var; // per-entry E|h_hat|^2
  std::vector<double> correlation;  // |E{h_hat^H (h - h_hat)}| normalized
  std::vector<double> pilot_energy; // per-entry E|y|^2
};

struct LinkMcResult {
  UplinkMcResult uplink;
  DownlinkMcResult downlink;
};

/// Uplink and downlink estimates from one shared set of channel draws.
LinkMcResult mc_link(Scheme scheme, const Scenario& sc, const Allocation& a, const McOptions& opt);

UplinkMcResult mc_ergodic_uplink(Scheme scheme, const Scenario& sc, const Allocation& a,
                                 const McOptions& opt);

DownlinkMcResult mc_swipt_downlink(Scheme scheme, const Scenario& sc, const Allocation& a,
                                   const McOptions& opt);

EstimationMcResult mc_channel_estimation(const Scenario& sc, std::span<const double> pilot_power,
                                         const McOptions& opt);

/// Closed-form bounds and Monte-Carlo estimates for one allocation.
RateReport make_rate_report(const std::string& scenario_id, Scheme scheme, const Scenario& sc,
                            const Allocation& a, const McOptions& opt);

}  // namespace raq
