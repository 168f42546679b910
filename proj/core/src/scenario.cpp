#include "raqswipt/scenario.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "raqswipt/errors.hpp"
#include "raqswipt/units.hpp"

namespace raq {

namespace {

// Absolute RF operating point. Only the 26 dB RAQR/RF ratio is pinned by the
// model; these set where the link budget sits (see README, "Calibration").
constexpr double kRfEffectiveGain = 1000.0;
constexpr double kRfNoiseW = 1e-7;
constexpr double kRaqrPhi2 = 0.5;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + " must be positive and finite");
  }
}

void require_size(const std::vector<double>& v, int K, const char* what) {
  if (static_cast<int>(v.size()) != K) {
    std::ostringstream os;
    os << what << " has " << v.size() << " entries, expected K=" << K;
    throw ConfigError(os.str());
  }
}

// Empty -> fallback; a constant vector of the wrong length -> resized.
void broadcast(std::vector<double>& v, int K, double fallback) {
  if (v.empty()) v.assign(K, fallback);
  if (static_cast<int>(v.size()) == K) return;
  bool constant = true;
  for (double x : v) constant = constant && x == v.front();
  if (constant) v.assign(K, v.front());
}

}  // namespace

std::string to_string(ReceiverKind kind) { return kind == ReceiverKind::kRaqr ? "raqr" : "rf"; }

void FrontEnd::validate() const {
  require_positive(rho, "frontend rho");
  require_positive(sigma2, "frontend sigma2");
  if (!(phi2 > 0.0 && phi2 <= 1.0)) throw ConfigError("frontend phi2 must lie in (0, 1]");
  if (kind == ReceiverKind::kRf && phi2 != 1.0) {
    throw ConfigError("RF front-end requires phi2 = 1");
  }
}

void SystemConfig::broadcast_per_device() {
  broadcast(rreq_u, K, 0.2);
  broadcast(rreq_d, K, 1.0);
  broadcast(sigma2_rf, K, kRfNoiseW);
  broadcast(sigma2_ks, K, kRfNoiseW);
}

void SystemConfig::validate() const {
  if (K < 1) throw ConfigError("K must be >= 1");
  if (M <= K) throw ConfigError("M must exceed K");
  if (tau < K) throw ConfigError("pilot length tau must be >= K");
  if (T <= tau) throw ConfigError("coherence block T must exceed tau");
  require_positive(ps_max, "ps_max");
  if (!(eta_eh > 0.0 && eta_eh <= 1.0)) throw ConfigError("eta_eh must lie in (0, 1]");
  require_positive(bandwidth, "bandwidth");
  require_positive(fc_ghz, "fc_ghz");
  require_size(rreq_u, K, "rreq_u");
  require_size(rreq_d, K, "rreq_d");
  require_size(sigma2_rf, K, "sigma2_rf");
  require_size(sigma2_ks, K, "sigma2_ks");
  for (int k = 0; k < K; ++k) {
    if (rreq_u[k] < 0.0 || rreq_d[k] < 0.0) throw ConfigError("rate floors must be >= 0");
    require_positive(sigma2_rf[k], "sigma2_rf");
    require_positive(sigma2_ks[k], "sigma2_ks");
  }
}

std::vector<double> Geometry::distances() const {
  std::vector<double> d;
  d.reserve(devices.size());
  for (const auto& p : devices) d.push_back(std::hypot(p.x - bs.x, p.y - bs.y));
  return d;
}

void Scenario::validate() const {
  system.validate();
  receiver.validate();
  rf.validate();
  if (static_cast<int>(beta.size()) != system.K) throw ConfigError("beta must have K entries");
  for (double b : beta) require_positive(b, "beta");
}

double path_loss_db(double distance_m, double fc_ghz) {
  if (!(distance_m > 0.0)) throw DomainError("path_loss_db: distance must be positive");
  if (!(fc_ghz > 0.0)) throw DomainError("path_loss_db: carrier frequency must be positive");
  return -32.4 - 20.0 * std::log10(distance_m) - 20.0 * std::log10(fc_ghz);
}

Geometry sample_geometry(Rng& rng, int K, const GeometryConfig& config) {
  if (config.region_radius < 0.0) throw ConfigError("region_radius must be >= 0");
  if (!(config.bs_distance > config.region_radius)) {
    throw ConfigError("bs_distance must exceed region_radius");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Geometry g;
  g.region_radius = config.region_radius;
  g.bs_distance = config.bs_distance;
  g.bs = {config.bs_distance, 0.0};
  g.devices.reserve(K);
  for (int k = 0; k < K; ++k) {
    const double r = config.region_radius * std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    g.devices.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return g;
}

double pilot_power_gain_db(const FrontEnd& raqr, const FrontEnd& rf) {
  return linear_to_db(raqr.snr_factor() / rf.snr_factor());
}

std::vector<double> large_scale_fading(const Geometry& geometry, double fc_ghz) {
  std::vector<double> beta;
  for (double d : geometry.distances()) beta.push_back(db_to_linear(path_loss_db(d, fc_ghz)));
  return beta;
}

FrontEnd default_rf_frontend() {
  return FrontEnd{kRfEffectiveGain, 1.0, kRfNoiseW, ReceiverKind::kRf};
}

FrontEnd default_raqr_frontend() {
  const FrontEnd rf = default_rf_frontend();
  FrontEnd raqr;
  raqr.kind = ReceiverKind::kRaqr;
  raqr.phi2 = kRaqrPhi2;
  raqr.sigma2 = rf.sigma2;
  raqr.rho = db_to_linear(kDefaultRaqrGainDb) * rf.rho / kRaqrPhi2;
  return raqr;
}

SystemConfig default_system() {
  SystemConfig s;
  s.broadcast_per_device();
  return s;
}

}  // namespace raq
