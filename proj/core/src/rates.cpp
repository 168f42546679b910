#include "raqswipt/rates.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>

#include "raqswipt/channel.hpp"
#include "raqswipt/errors.hpp"
#include "raqswipt/units.hpp"

namespace raq {

namespace {

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void require_zf(const Scenario& sc) {
  if (sc.M() <= sc.K()) throw ConfigError("ZF requires M > K");
}

// rho tau p beta |Phi|^2 + sigma^2, the common MMSE denominator.
double pilot_denominator(int k, const Allocation& a, const Scenario& sc) {
  const auto& fe = sc.receiver;
  return fe.rho * fe.phi2 * sc.system.tau * a.p_pilot[k] * sc.beta[k] + fe.sigma2;
}

}  // namespace

std::string to_string(Scheme scheme) { return scheme == Scheme::kMrcMrt ? "mrc" : "zf"; }

Scheme parse_scheme(const std::string& text) {
  if (text == "mrc" || text == "mrt" || text == "mrc_mrt") return Scheme::kMrcMrt;
  if (text == "zf") return Scheme::kZf;
  throw ConfigError("unknown scheme '" + text + "' (expected mrc or zf)");
}

void Allocation::validate(const SystemConfig& system) const {
  const auto K = static_cast<std::size_t>(system.K);
  if (p_pilot.size() != K || p_data.size() != K || p_swipt.size() != K || alpha.size() != K) {
    throw ConfigError("allocation vectors must have K entries");
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (p_pilot[k] < 0 || p_data[k] < 0 || p_swipt[k] < 0) throw ConfigError("negative power");
    if (alpha[k] < 0 || alpha[k] > 1) throw ConfigError("alpha outside [0, 1]");
  }
  if (T_U < 0 || T_D < 0) throw ConfigError("negative block length");
}

std::vector<double> error_variances(const Scenario& sc, const Allocation& a) {
  std::vector<double> e(sc.K());
  for (int k = 0; k < sc.K(); ++k) {
    e[k] = error_variance(sc.beta[k], a.p_pilot[k], sc.system.tau, sc.receiver);
  }
  return e;
}

double sinr_mrc_ul(int k, const Allocation& a, const Scenario& sc) {
  const auto& fe = sc.receiver;
  const double gain = fe.rho * fe.phi2;
  double interference = fe.normalized_noise();
  for (int j = 0; j < sc.K(); ++j) interference += a.p_data[j] * sc.beta[j];
  const double num = sc.M() * a.p_data[k] * gain * sc.system.tau * a.p_pilot[k] * sc.beta[k] * sc.beta[k];
  return num / (interference * pilot_denominator(k, a, sc));
}

double sinr_zf_ul(int k, const Allocation& a, const Scenario& sc) {
  require_zf(sc);
  const auto& fe = sc.receiver;
  const double gain = fe.rho * fe.phi2;
  const auto e = error_variances(sc, a);
  double interference = fe.normalized_noise();
  for (int j = 0; j < sc.K(); ++j) interference += a.p_data[j] * e[j];
  const double num =
      (sc.M() - sc.K()) * a.p_data[k] * gain * sc.system.tau * a.p_pilot[k] * sc.beta[k] * sc.beta[k];
  return num / (interference * pilot_denominator(k, a, sc));
}

double sinr_mrt_dl(int k, const Allocation& a, const Scenario& sc, std::span<const double> e) {
  const double g = sc.rf.rho;
  const double alpha = a.alpha[k];
  const double num = g * a.p_swipt[k] * alpha * sc.M() * (sc.beta[k] - e[k]);
  const double den = alpha * sc.beta[k] * g * sum(a.p_swipt) + alpha * sc.system.sigma2_rf[k] +
                     sc.system.sigma2_ks[k];
  return num / den;
}

double sinr_zf_dl(int k, const Allocation& a, const Scenario& sc, std::span<const double> e) {
  require_zf(sc);
  const double g = sc.rf.rho;
  const double alpha = a.alpha[k];
  const double num = g * a.p_swipt[k] * alpha * (sc.M() - sc.K()) * (sc.beta[k] - e[k]);
  const double den =
      alpha * e[k] * g * sum(a.p_swipt) + alpha * sc.system.sigma2_rf[k] + sc.system.sigma2_ks[k];
  return num / den;
}

double energy_mrt(int k, const Allocation& a, const Scenario& sc, std::span<const double> e) {
  const auto& s = sc.system;
  const double g = sc.rf.rho;
  const double received = g * a.p_swipt[k] * sc.M() * (sc.beta[k] - e[k]) + sc.beta[k] * g * sum(a.p_swipt);
  return static_cast<double>(a.T_D) / s.T * s.eta_eh * (1.0 - a.alpha[k]) * received;
}

double energy_zf(int k, const Allocation& a, const Scenario& sc, std::span<const double> e) {
  require_zf(sc);
  const auto& s = sc.system;
  const double g = sc.rf.rho;
  const double received =
      g * a.p_swipt[k] * (sc.M() - sc.K()) * (sc.beta[k] - e[k]) + e[k] * g * sum(a.p_swipt);
  return static_cast<double>(a.T_D) / s.T * s.eta_eh * (1.0 - a.alpha[k]) * received;
}

double rate_lb(double sinr, int T_active, int T, double B) {
  if (sinr < 0.0) throw DomainError("rate_lb: negative SINR");
  if (T_active < 0 || T_active > T) throw DomainError("rate_lb: T_active outside [0, T]");
  return static_cast<double>(T_active) / T * B * std::log2(1.0 + sinr);
}

double low_snr_gain(int T_U, int T, double sinr_rf, const FrontEnd& raqr, const FrontEnd& rf) {
  const double g = raqr.snr_factor() / rf.snr_factor();
  return static_cast<double>(T_U) / T * std::log2(1.0 + sinr_rf * g * g);
}

LinkEvaluation evaluate(const Scenario& sc, const Allocation& a, Scheme scheme) {
  const int K = sc.K();
  const auto& s = sc.system;
  LinkEvaluation ev;
  ev.scheme = scheme;
  ev.e = error_variances(sc, a);
  ev.sinr_u.resize(K);
  ev.sinr_d.resize(K);
  ev.rate_u.resize(K);
  ev.rate_d.resize(K);
  ev.energy.resize(K);
  for (int k = 0; k < K; ++k) {
    if (scheme == Scheme::kMrcMrt) {
      ev.sinr_u[k] = sinr_mrc_ul(k, a, sc);
      ev.sinr_d[k] = sinr_mrt_dl(k, a, sc, ev.e);
      ev.energy[k] = energy_mrt(k, a, sc, ev.e);
    } else {
      ev.sinr_u[k] = sinr_zf_ul(k, a, sc);
      ev.sinr_d[k] = sinr_zf_dl(k, a, sc, ev.e);
      ev.energy[k] = energy_zf(k, a, sc, ev.e);
    }
    ev.rate_u[k] = rate_lb(ev.sinr_u[k], a.T_U, s.T, 1.0);
    ev.rate_d[k] = rate_lb(ev.sinr_d[k], a.T_D, s.T, s.bandwidth);
    ev.sum_rate += ev.rate_u[k] + ev.rate_d[k];
  }
  return ev;
}

double max_constraint_violation(const Scenario& sc, const Allocation& a, Scheme scheme,
                                double battery_w) {
  const auto& s = sc.system;
  const auto ev = evaluate(sc, a, scheme);
  double worst = 0.0;
  auto note = [&worst](double v) { worst = std::max(worst, v); };
  for (int k = 0; k < sc.K(); ++k) {
    if (s.rreq_u[k] > 0) note((s.rreq_u[k] - ev.rate_u[k]) / s.rreq_u[k]);
    if (s.rreq_d[k] > 0) note((s.rreq_d[k] - ev.rate_d[k]) / s.rreq_d[k]);
    const double spent = s.tau * a.p_pilot[k] + a.T_U * a.p_data[k];
    const double available = battery_w > 0 ? s.T * battery_w : s.T * ev.energy[k];
    const double scale = std::max({spent, available, 1e-300});
    note((spent - available) / scale);
    note(-a.alpha[k]);
    note(a.alpha[k] - 1.0);
    note(-a.p_pilot[k]);
    note(-a.p_data[k]);
    note(-a.p_swipt[k]);
  }
  double ps_total = 0.0;
  for (double p : a.p_swipt) ps_total += p;
  note((ps_total - s.ps_max) / s.ps_max);
  note(static_cast<double>(a.T_U + a.T_D - (s.T - s.tau)) / s.T);
  note(-static_cast<double>(std::min(a.T_U, a.T_D)));
  return worst;
}

void write_rate_report_header(std::ostream& out) {
  out << "scenario,scheme,k,rate_u_lb,rate_d_lb,energy_lb,rate_u_mc,rate_d_mc,energy_mc,"
         "rate_u_se,rate_d_se,energy_se\n";
}

void write_rate_report_rows(std::ostream& out, const RateReport& r) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(10);
  for (std::size_t k = 0; k < r.rate_u_lb.size(); ++k) {
    auto at = [k](const std::vector<double>& v) { return k < v.size() ? v[k] : std::nan(""); };
    out << r.scenario_id << ',' << to_string(r.scheme) << ',' << k << ',' << at(r.rate_u_lb) << ','
        << at(r.rate_d_lb) << ',' << at(r.energy_lb) << ',' << at(r.rate_u_mc) << ','
        << at(r.rate_d_mc) << ',' << at(r.energy_mc) << ',' << at(r.rate_u_se) << ','
        << at(r.rate_d_se) << ',' << at(r.energy_se) << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace raq
