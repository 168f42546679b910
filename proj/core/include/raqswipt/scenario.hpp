#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "raqswipt/rng.hpp"

namespace raq {

enum class ReceiverKind { kRaqr, kRf };

std::string to_string(ReceiverKind kind);

/// Aggregate receiver model: y = sqrt(rho) * Phi * D * H * s + n with
/// |Phi|^2 = phi2 and n ~ CN(0, sigma2 I). The Rydberg front-end enters every
/// closed form only through this triple.
struct FrontEnd {
  double rho = 1.0;
  double phi2 = 1.0;
  double sigma2 = 1.0;
  ReceiverKind kind = ReceiverKind::kRf;

  /// rho * |Phi|^2 / sigma^2, the per-watt receive SNR factor.
  double snr_factor() const { return rho * phi2 / sigma2; }
  /// sigma^2 / (rho |Phi|^2), noise referred to the channel input.
  double normalized_noise() const { return sigma2 / (rho * phi2); }

  void validate() const;
};

/// Phase parameters used only by the signal-level Monte-Carlo path; they
/// cancel in every closed-form statistic.
struct ArrayPhase {
  double lo_angle_rad = 0.0;         // LO angle of arrival
  double spacing_wavelengths = 0.5;  // vapor-cell spacing d / lambda
  double phi_phase_rad = 0.0;        // arg(Phi)
};

struct SystemConfig {
  int M = 100;               // vapor cells / transmit antennas
  int K = 10;                // devices
  int tau = 10;              // pilot length (symbols)
  int T = 400;               // coherence block (symbols)
  double ps_max = 50.0;      // BS SWIPT power budget (W)
  double eta_eh = 0.2;       // energy-conversion efficiency
  std::vector<double> rreq_u;  // uplink rate floors (bit/s/Hz)
  std::vector<double> rreq_d;  // downlink rate floors (bit/s/Hz)
  double bandwidth = 1.0;    // downlink bandwidth factor B
  double fc_ghz = 3.0;       // carrier frequency for path loss
  std::vector<double> sigma2_rf;  // device antenna noise (W)
  std::vector<double> sigma2_ks;  // device baseband noise (W)
  double battery_dbm = 5.0;  // uplink power budget of battery-powered baselines

  /// Resize per-device vectors to K, broadcasting a single value.
  void broadcast_per_device();
  void validate() const;
};

struct GeometryConfig {
  double region_radius = 50.0;  // m
  double bs_distance = 150.0;   // m, BS to region center
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Geometry {
  std::vector<Point2> devices;
  Point2 bs;
  double region_radius = 0.0;
  double bs_distance = 0.0;

  std::vector<double> distances() const;
};

/// Everything the rate formulas and optimizers need for one drop.
struct Scenario {
  SystemConfig system;
  FrontEnd receiver;  // uplink receiver (RAQR, or RF for baselines)
  FrontEnd rf;        // RF chain; rf.rho is the downlink effective gain
  ArrayPhase array;
  std::vector<double> beta;  // large-scale fading, linear

  int K() const { return system.K; }
  int M() const { return system.M; }
  void validate() const;
};

/// -32.4 - 20 lg(d) - 20 lg(fc) in dB.
double path_loss_db(double distance_m, double fc_ghz);

/// Uniform device drop over the disk, BS at bs_distance from the center.
Geometry sample_geometry(Rng& rng, int K, const GeometryConfig& config);

/// Pilot power reduction of `raqr` relative to `rf` in dB.
double pilot_power_gain_db(const FrontEnd& raqr, const FrontEnd& rf);

std::vector<double> large_scale_fading(const Geometry& geometry, double fc_ghz);

// Default front-ends. The RAQR triple is calibrated so that its pilot power
// gain over the RF front-end is 26 dB.
inline constexpr double kDefaultRaqrGainDb = 26.0;
FrontEnd default_rf_frontend();
FrontEnd default_raqr_frontend();
SystemConfig default_system();

}  // namespace raq
