#include "raqswipt/channel.hpp"

#include <cmath>
#include <numbers>

#include "raqswipt/errors.hpp"

namespace raq {

ChannelSet sample_channels(Rng& rng, std::span<const double> beta, int M) {
  ChannelSet set;
  set.beta.assign(beta.begin(), beta.end());
  const int K = static_cast<int>(beta.size());
  set.H.resize(M, K);
  for (int k = 0; k < K; ++k) {
    if (beta[k] < 0.0) throw DomainError("sample_channels: beta must be >= 0");
    for (int m = 0; m < M; ++m) set.H(m, k) = complex_normal(rng, beta[k]);
  }
  return set;
}

Eigen::VectorXcd array_phase_diagonal(int M, const ArrayPhase& phase) {
  Eigen::VectorXcd d(M);
  const double step = 2.0 * std::numbers::pi * phase.spacing_wavelengths * std::sin(phase.lo_angle_rad);
  for (int m = 0; m < M; ++m) d(m) = std::polar(1.0, -step * m);
  return d;
}

std::complex<double> phi_value(const FrontEnd& fe, const ArrayPhase& phase) {
  return std::polar(std::sqrt(fe.phi2), phase.phi_phase_rad);
}

Eigen::MatrixXcd receive_pilots(const Eigen::MatrixXcd& H, std::span<const double> pilot_power,
                                int tau, const FrontEnd& fe, const ArrayPhase& phase, Rng& rng) {
  const int M = static_cast<int>(H.rows());
  const int K = static_cast<int>(H.cols());
  if (tau < K) throw ConfigError("receive_pilots: tau < K, orthogonal pilots impossible");
  if (static_cast<int>(pilot_power.size()) != K) throw ConfigError("receive_pilots: size mismatch");
  const Eigen::VectorXcd d = array_phase_diagonal(M, phase);
  const std::complex<double> phi = phi_value(fe, phase);
  Eigen::MatrixXcd Y(M, K);
  for (int k = 0; k < K; ++k) {
    const double amp = std::sqrt(fe.rho * tau * pilot_power[k]);
    for (int m = 0; m < M; ++m) {
      Y(m, k) = amp * phi * d(m) * H(m, k) + complex_normal(rng, fe.sigma2);
    }
  }
  return Y;
}

double error_variance(double beta, double pilot_power, int tau, const FrontEnd& fe) {
  return beta * fe.sigma2 / (fe.rho * tau * pilot_power * beta * fe.phi2 + fe.sigma2);
}

double equivalent_snr(double beta, double pilot_power, const FrontEnd& fe) {
  return fe.rho * pilot_power * beta * fe.phi2 / fe.sigma2;
}

double nmse(double gamma, int tau) {
  if (gamma < 0.0) throw DomainError("nmse: gamma must be >= 0");
  return 1.0 / (1.0 + tau * gamma);
}

EstimateColumn mmse_estimate(const Eigen::VectorXcd& y, double beta, double pilot_power, int tau,
                             const FrontEnd& fe, const ArrayPhase& phase) {
  if (pilot_power < 0.0) throw DomainError("mmse_estimate: pilot power must be >= 0");
  const int M = static_cast<int>(y.size());
  EstimateColumn col;
  col.e = error_variance(beta, pilot_power, tau, fe);
  col.gamma = equivalent_snr(beta, pilot_power, fe);
  const double denom = fe.rho * tau * pilot_power * beta * fe.phi2 + fe.sigma2;
  const std::complex<double> scale =
      std::sqrt(fe.rho * tau * pilot_power) * beta * std::conj(phi_value(fe, phase)) / denom;
  const Eigen::VectorXcd d = array_phase_diagonal(M, phase);
  col.h_hat = scale * d.conjugate().cwiseProduct(y);
  return col;
}

EstimateSet mmse_estimate_all(const Eigen::MatrixXcd& Y, std::span<const double> beta,
                              std::span<const double> pilot_power, int tau, const FrontEnd& fe,
                              const ArrayPhase& phase) {
  const int K = static_cast<int>(Y.cols());
  EstimateSet set;
  set.H_hat.resize(Y.rows(), K);
  set.e.resize(K);
  set.gamma.resize(K);
  for (int k = 0; k < K; ++k) {
    auto col = mmse_estimate(Y.col(k), beta[k], pilot_power[k], tau, fe, phase);
    set.H_hat.col(k) = col.h_hat;
    set.e[k] = col.e;
    set.gamma[k] = col.gamma;
  }
  return set;
}

}  // namespace raq
