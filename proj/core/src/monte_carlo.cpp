#include "raqswipt/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "raqswipt/channel.hpp"
#include "raqswipt/errors.hpp"
#include "raqswipt/parallel.hpp"
#include "raqswipt/stats.hpp"

namespace raq {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;

// Raw sums of one batch. Ratio estimates (the UatF SINRs) are formed from
// these, so they merge exactly by adding.
struct LinkSums {
  std::int64_t n = 0;
  VectorXcd ul_gain;   // sum g_kk
  MatrixXd ul_power;   // sum |g_kk'|^2
  VectorXd ul_noise;   // sum sigma^2 ||v_k||^2
  VectorXcd dl_gain;   // sum h_k^H w_k
  MatrixXd dl_power;   // sum |h_k^H w_k'|^2
  std::vector<RunningStats> ul_ergodic, dl_ergodic, energy;

  explicit LinkSums(int K)
      : ul_gain(VectorXcd::Zero(K)),
        ul_power(MatrixXd::Zero(K, K)),
        ul_noise(VectorXd::Zero(K)),
        dl_gain(VectorXcd::Zero(K)),
        dl_power(MatrixXd::Zero(K, K)),
        ul_ergodic(K),
        dl_ergodic(K),
        energy(K) {}

  void merge(const LinkSums& o) {
    n += o.n;
    ul_gain += o.ul_gain;
    ul_power += o.ul_power;
    ul_noise += o.ul_noise;
    dl_gain += o.dl_gain;
    dl_power += o.dl_power;
    for (std::size_t k = 0; k < energy.size(); ++k) {
      ul_ergodic[k].merge(o.ul_ergodic[k]);
      dl_ergodic[k].merge(o.dl_ergodic[k]);
      energy[k].merge(o.energy[k]);
    }
  }
};

int batch_count(const McOptions& opt) {
  if (opt.trials <= 0) throw ConfigError("Monte Carlo needs trials > 0");
  return std::clamp(opt.batches, 1, opt.trials);
}

int batch_trials(const McOptions& opt, int batches, int b) {
  return opt.trials / batches + (b < opt.trials % batches ? 1 : 0);
}

double uatf_ul_sinr(const LinkSums& s, int k) {
  const double n = static_cast<double>(s.n);
  const double ds = std::norm(s.ul_gain(k) / n);
  const double total = s.ul_power.row(k).sum() / n;
  return ds / (total - ds + s.ul_noise(k) / n);
}

double uatf_dl_sinr(const LinkSums& s, int k, const Allocation& a, const Scenario& sc) {
  const double n = static_cast<double>(s.n);
  const double g = sc.rf.rho;
  const double alpha = a.alpha[k];
  const double ds = std::norm(s.dl_gain(k) / n);
  double total = 0.0;
  for (int j = 0; j < sc.K(); ++j) total += g * a.p_swipt[j] * s.dl_power(k, j) / n;
  const double num = alpha * g * a.p_swipt[k] * ds;
  const double den = alpha * (total - g * a.p_swipt[k] * ds + sc.system.sigma2_rf[k]) +
                     sc.system.sigma2_ks[k];
  return num / den;
}

// One channel realization: pilots, estimates, combiners, beams.
void simulate_trial(Scheme scheme, const Scenario& sc, const Allocation& a, Rng& rng,
                    const VectorXcd& d, cd phi, LinkSums& s) {
  const int M = sc.M();
  const int K = sc.K();
  const auto& fe = sc.receiver;
  const auto& sys = sc.system;

  const ChannelSet ch = sample_channels(rng, sc.beta, M);
  const MatrixXcd Y = receive_pilots(ch.H, a.p_pilot, sys.tau, fe, sc.array, rng);
  const EstimateSet est = mmse_estimate_all(Y, sc.beta, a.p_pilot, sys.tau, fe, sc.array);

  // Uplink: the receiver sees the effective channel Phi D h.
  const MatrixXcd H_eff = phi * d.asDiagonal() * ch.H;
  const MatrixXcd H_hat_eff = phi * d.asDiagonal() * est.H_hat;
  MatrixXcd V;
  if (scheme == Scheme::kMrcMrt) {
    V = H_hat_eff;
  } else {
    const MatrixXcd gram = H_hat_eff.adjoint() * H_hat_eff;
    V = H_hat_eff * gram.ldlt().solve(MatrixXcd::Identity(K, K));
  }
  MatrixXcd G = V.adjoint() * H_eff;  // G(k, j) = v_k^H Phi D h_j
  for (int j = 0; j < K; ++j) G.col(j) *= std::sqrt(fe.rho * a.p_data[j]);
  for (int k = 0; k < K; ++k) {
    const double noise = fe.sigma2 * V.col(k).squaredNorm();
    double interference = 0.0;
    for (int j = 0; j < K; ++j) {
      const double p = std::norm(G(k, j));
      s.ul_power(k, j) += p;
      if (j != k) interference += p;
    }
    s.ul_gain(k) += G(k, k);
    s.ul_noise(k) += noise;
    s.ul_ergodic[k].add(std::log2(1.0 + std::norm(G(k, k)) / (interference + noise)));
  }

  // Downlink: beams normalized by the root of their mean squared norm.
  MatrixXcd W;
  if (scheme == Scheme::kMrcMrt) {
    W = est.H_hat;
    for (int k = 0; k < K; ++k) W.col(k) /= std::sqrt(M * (sc.beta[k] - est.e[k]));
  } else {
    const MatrixXcd gram = est.H_hat.adjoint() * est.H_hat;
    W = est.H_hat * gram.ldlt().solve(MatrixXcd::Identity(K, K));
    for (int k = 0; k < K; ++k) W.col(k) *= std::sqrt((M - K) * (sc.beta[k] - est.e[k]));
  }
  const MatrixXcd A = ch.H.adjoint() * W;  // A(k, j) = h_k^H w_j
  const double g = sc.rf.rho;
  const double prelog = static_cast<double>(a.T_D) / sys.T;
  for (int k = 0; k < K; ++k) {
    double received = 0.0;
    double interference = 0.0;
    for (int j = 0; j < K; ++j) {
      const double p = std::norm(A(k, j));
      s.dl_power(k, j) += p;
      received += g * a.p_swipt[j] * p;
      if (j != k) interference += g * a.p_swipt[j] * p;
    }
    s.dl_gain(k) += A(k, k);
    const double alpha = a.alpha[k];
    const double inst = alpha * g * a.p_swipt[k] * std::norm(A(k, k)) /
                        (alpha * (interference + sys.sigma2_rf[k]) + sys.sigma2_ks[k]);
    s.dl_ergodic[k].add(std::log2(1.0 + inst));
    s.energy[k].add(prelog * sys.eta_eh * (1.0 - alpha) * received);
  }
  ++s.n;
}

std::vector<LinkSums> run_link_batches(Scheme scheme, const Scenario& sc, const Allocation& a,
                                       const McOptions& opt) {
  sc.validate();
  a.validate(sc.system);
  if (scheme == Scheme::kZf && sc.M() <= sc.K()) throw ConfigError("ZF requires M > K");
  const int batches = batch_count(opt);
  const VectorXcd d = array_phase_diagonal(sc.M(), sc.array);
  const cd phi = phi_value(sc.receiver, sc.array);
  std::vector<LinkSums> out(batches, LinkSums(sc.K()));
  parallel_for(static_cast<std::size_t>(batches), opt.threads, [&](std::size_t b) {
    Rng rng = make_stream(opt.seed, b);
    const int n = batch_trials(opt, batches, static_cast<int>(b));
    for (int t = 0; t < n; ++t) simulate_trial(scheme, sc, a, rng, d, phi, out[b]);
  });
  return out;
}

LinkSums merge_all(const std::vector<LinkSums>& batches, int K) {
  LinkSums total(K);
  for (const auto& b : batches) total.merge(b);
  return total;
}

// Standard error of a ratio estimate from the spread of per-batch values.
template <typename F>
double batch_se(const std::vector<LinkSums>& batches, F&& estimate) {
  if (batches.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  RunningStats rs;
  for (const auto& b : batches) rs.add(estimate(b));
  return rs.sem();
}

}  // namespace

LinkMcResult mc_link(Scheme scheme, const Scenario& sc, const Allocation& a, const McOptions& opt) {
  const auto batches = run_link_batches(scheme, sc, a, opt);
  const LinkSums total = merge_all(batches, sc.K());
  const int T = sc.system.T;
  const double B = sc.system.bandwidth;
  LinkMcResult out;
  UplinkMcResult& u = out.uplink;
  DownlinkMcResult& d = out.downlink;
  u.small_ensemble = d.small_ensemble = opt.trials < kMinAcceptanceTrials;
  const double prelog_u = static_cast<double>(a.T_U) / T;
  const double prelog_d = static_cast<double>(a.T_D) / T * B;
  for (int k = 0; k < sc.K(); ++k) {
    const double su = uatf_ul_sinr(total, k);
    u.sinr.push_back(su);
    u.rate.push_back(rate_lb(std::max(su, 0.0), a.T_U, T));
    u.rate_se.push_back(batch_se(batches, [&](const LinkSums& b) {
      return rate_lb(std::max(uatf_ul_sinr(b, k), 0.0), a.T_U, T);
    }));
    u.ergodic_rate.push_back(prelog_u * total.ul_ergodic[k].mean());
    u.ergodic_se.push_back(prelog_u * total.ul_ergodic[k].sem());

    const double sd = uatf_dl_sinr(total, k, a, sc);
    d.sinr.push_back(sd);
    d.rate.push_back(rate_lb(std::max(sd, 0.0), a.T_D, T, B));
    d.rate_se.push_back(batch_se(batches, [&](const LinkSums& b) {
      return rate_lb(std::max(uatf_dl_sinr(b, k, a, sc), 0.0), a.T_D, T, B);
    }));
    d.energy.push_back(total.energy[k].mean());
    d.energy_se.push_back(total.energy[k].sem());
    d.ergodic_rate.push_back(prelog_d * total.dl_ergodic[k].mean());
    d.ergodic_se.push_back(prelog_d * total.dl_ergodic[k].sem());
  }
  return out;
}

UplinkMcResult mc_ergodic_uplink(Scheme scheme, const Scenario& sc, const Allocation& a,
                                 const McOptions& opt) {
  return mc_link(scheme, sc, a, opt).uplink;
}

DownlinkMcResult mc_swipt_downlink(Scheme scheme, const Scenario& sc, const Allocation& a,
                                   const McOptions& opt) {
  return mc_link(scheme, sc, a, opt).downlink;
}

EstimationMcResult mc_channel_estimation(const Scenario& sc, std::span<const double> pilot_power,
                                         const McOptions& opt) {
  sc.validate();
  const int K = sc.K();
  const int M = sc.M();
  if (static_cast<int>(pilot_power.size()) != K) throw ConfigError("pilot power size mismatch");
  const int batches = batch_count(opt);

  struct Sums {
    std::vector<RunningStats> err, est, obs;
    std::vector<cd> cross;
    explicit Sums(int K) : err(K), est(K), obs(K), cross(K, cd{}) {}
  };
  std::vector<Sums> out(batches, Sums(K));
  parallel_for(static_cast<std::size_t>(batches), opt.threads, [&](std::size_t b) {
    Rng rng = make_stream(opt.seed, b);
    Sums& s = out[b];
    const int n = batch_trials(opt, batches, static_cast<int>(b));
    for (int t = 0; t < n; ++t) {
      const ChannelSet ch = sample_channels(rng, sc.beta, M);
      const MatrixXcd Y = receive_pilots(ch.H, pilot_power, sc.system.tau, sc.receiver, sc.array, rng);
      const EstimateSet est =
          mmse_estimate_all(Y, sc.beta, pilot_power, sc.system.tau, sc.receiver, sc.array);
      for (int k = 0; k < K; ++k) {
        const VectorXcd err = ch.H.col(k) - est.H_hat.col(k);
        s.err[k].add(err.squaredNorm() / M);
        s.est[k].add(est.H_hat.col(k).squaredNorm() / M);
        s.obs[k].add(Y.col(k).squaredNorm() / M);
        s.cross[k] += est.H_hat.col(k).dot(err) / static_cast<double>(M);
      }
    }
  });

  Sums total(K);
  for (const auto& s : out) {
    for (int k = 0; k < K; ++k) {
      total.err[k].merge(s.err[k]);
      total.est[k].merge(s.est[k]);
      total.obs[k].merge(s.obs[k]);
      total.cross[k] += s.cross[k];
    }
  }
  EstimationMcResult r;
  for (int k = 0; k < K; ++k) {
    const double n = static_cast<double>(total.err[k].count());
    r.mse.push_back(total.err[k].mean());
    r.mse_se.push_back(total.err[k].sem());
    r.nmse.push_back(total.err[k].mean() / sc.beta[k]);
    r.nmse_se.push_back(total.err[k].sem() / sc.beta[k]);
    r.estimate_var.push_back(total.est[k].mean());
    r.pilot_energy.push_back(total.obs[k].mean());
    r.correlation.push_back(std::abs(total.cross[k] / n) /
                            std::sqrt(total.est[k].mean() * total.err[k].mean()));
  }
  return r;
}

RateReport make_rate_report(const std::string& scenario_id, Scheme scheme, const Scenario& sc,
                            const Allocation& a, const McOptions& opt) {
  const LinkEvaluation ev = evaluate(sc, a, scheme);
  const LinkMcResult mc = mc_link(scheme, sc, a, opt);
  RateReport r;
  r.scenario_id = scenario_id;
  r.scheme = scheme;
  r.rate_u_lb = ev.rate_u;
  r.rate_d_lb = ev.rate_d;
  r.energy_lb = ev.energy;
  r.rate_u_mc = mc.uplink.rate;
  r.rate_d_mc = mc.downlink.rate;
  r.energy_mc = mc.downlink.energy;
  r.rate_u_se = mc.uplink.rate_se;
  r.rate_d_se = mc.downlink.rate_se;
  r.energy_se = mc.downlink.energy_se;
  return r;
}

}  // namespace raq
