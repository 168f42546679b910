#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "raqswipt/rng.hpp"
#include "raqswipt/scenario.hpp"

namespace raq {

/// h_k ~ CN(0, beta_k I_M), stacked as the columns of H.
struct ChannelSet {
  std::vector<double> beta;
  Eigen::MatrixXcd H;
};

/// MMSE channel estimates with per-entry error variances e_k and equivalent
/// pilot SNRs gamma_k.
struct EstimateSet {
  Eigen::MatrixXcd H_hat;
  std::vector<double> e;
  std::vector<double> gamma;
};

ChannelSet sample_channels(Rng& rng, std::span<const double> beta, int M);

/// Unit-modulus phase diagonal D of the vapor-cell array.
Eigen::VectorXcd array_phase_diagonal(int M, const ArrayPhase& phase);

/// Complex Phi with |Phi|^2 = fe.phi2 and the configured argument.
std::complex<double> phi_value(const FrontEnd& fe, const ArrayPhase& phase);

/// De-spread pilot observations y_k = sqrt(rho tau p_k) Phi D h_k + N q_k,
/// one column per device. The orthonormal pilot matrix is never formed:
/// N q_k is drawn directly as CN(0, sigma2 I_M).
Eigen::MatrixXcd receive_pilots(const Eigen::MatrixXcd& H, std::span<const double> pilot_power,
                                int tau, const FrontEnd& fe, const ArrayPhase& phase, Rng& rng);

/// Per-entry MMSE error variance beta sigma^2 / (rho tau p beta |Phi|^2 + sigma^2).
double error_variance(double beta, double pilot_power, int tau, const FrontEnd& fe);

/// gamma = rho p beta |Phi|^2 / sigma^2.
double equivalent_snr(double beta, double pilot_power, const FrontEnd& fe);

/// 1 / (1 + tau gamma).
double nmse(double gamma, int tau);

struct EstimateColumn {
  Eigen::VectorXcd h_hat;
  double e = 0.0;
  double gamma = 0.0;
};

EstimateColumn mmse_estimate(const Eigen::VectorXcd& y, double beta, double pilot_power, int tau,
                             const FrontEnd& fe, const ArrayPhase& phase);

EstimateSet mmse_estimate_all(const Eigen::MatrixXcd& Y, std::span<const double> beta,
                              std::span<const double> pilot_power, int tau, const FrontEnd& fe,
                              const ArrayPhase& phase);

}  // namespace raq
