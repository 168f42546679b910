#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "raqswipt/scenario.hpp"

namespace raq {

/// Linear processing pair: MRC uplink with MRT downlink, or ZF on both.
enum class Scheme { kMrcMrt, kZf };

std::string to_string(Scheme scheme);
Scheme parse_scheme(const std::string& text);

/// Decision variables of the joint design.
struct Allocation {
  std::vector<double> p_pilot;    // p^p_k (W)
  std::vector<double> p_data;     // p^d_k (W)
  std::vector<double> p_swipt;    // p^s_k (W)
  std::vector<double> alpha;      // power-splitting coefficient
  int T_U = 0;
  int T_D = 0;

  int K() const { return static_cast<int>(p_pilot.size()); }
  void validate(const SystemConfig& system) const;
};

// Closed-form lower bounds. `sc.receiver` is the uplink receiver; downlink
// terms use sc.rf.rho and the device noises in sc.system.

/// MMSE error variance e_k for every device at the allocation's pilot powers.
std::vector<double> error_variances(const Scenario& sc, const Allocation& a);

double sinr_mrc_ul(int k, const Allocation& a, const Scenario& sc);
double sinr_zf_ul(int k, const Allocation& a, const Scenario& sc);
double sinr_mrt_dl(int k, const Allocation& a, const Scenario& sc, std::span<const double> e);
double sinr_zf_dl(int k, const Allocation& a, const Scenario& sc, std::span<const double> e);

/// Harvested energy per symbol, including the T_D/T prelog.
double energy_mrt(int k, const Allocation& a, const Scenario& sc, std::span<const double> e);
double energy_zf(int k, const Allocation& a, const Scenario& sc, std::span<const double> e);

/// (T_active / T) * B * log2(1 + sinr).
double rate_lb(double sinr, int T_active, int T, double B = 1.0);

/// Low-SINR uplink rate gain of `raqr` over `rf` given the RF SINR, with the
/// receiver SNR factor rho|Phi|^2/sigma^2 normalized by the RF one.
double low_snr_gain(int T_U, int T, double sinr_rf, const FrontEnd& raqr, const FrontEnd& rf);

/// Every closed-form quantity of one allocation.
struct LinkEvaluation {
  Scheme scheme = Scheme::kMrcMrt;
  std::vector<double> e;
  std::vector<double> sinr_u, sinr_d;
  std::vector<double> rate_u, rate_d;
  std::vector<double> energy;  // per-symbol harvested energy bound
  double sum_rate = 0.0;
};

LinkEvaluation evaluate(const Scenario& sc, const Allocation& a, Scheme scheme);

/// Largest relative violation of the original joint-design constraints:
/// rate floors, BS budget, energy causality (or battery budget when
/// `battery_w` > 0), alpha in [0,1], block budget.
double max_constraint_violation(const Scenario& sc, const Allocation& a, Scheme scheme,
                                double battery_w = 0.0);

/// Per-device closed-form bounds next to their Monte-Carlo estimates.
struct RateReport {
  std::string scenario_id;
  Scheme scheme = Scheme::kMrcMrt;
  std::vector<double> rate_u_lb, rate_d_lb, energy_lb;
  std::vector<double> rate_u_mc, rate_d_mc, energy_mc;
  std::vector<double> rate_u_se, rate_d_se, energy_se;
};

/// CSV header / rows: scenario id, scheme, k, bounds, MC means, MC standard errors.
void write_rate_report_header(std::ostream& out);
void write_rate_report_rows(std::ostream& out, const RateReport& report);

}  // namespace raq
