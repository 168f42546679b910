// Brute-force reference computations shared by the unit and acceptance
// tests. Everything here is written from the model equations directly and
// does not call the library code it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "raqswipt/blocks.hpp"
#include "raqswipt/posynomial.hpp"
#include "raqswipt/rates.hpp"
#include "raqswipt/scenario.hpp"

namespace oracle {

inline std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return v;
}

/// Central finite-difference derivative of f at x along coordinate i.
inline double partial(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                      std::size_t i, double rel_step = 1e-6) {
  const double h = rel_step * std::max(1.0, std::abs(x[i]));
  const double x0 = x[i];
  x[i] = x0 + h;
  const double up = f(x);
  x[i] = x0 - h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

/// Best integer (T_U, T_D) by checking every pair. Same feasibility rules as
/// the block LP: both lengths >= 1 and >= their floors, T_U + T_D <= budget,
/// and the per-device energy balance.
struct BlockOptimum {
  bool feasible = false;
  int T_U = 0;
  int T_D = 0;
  double objective = -std::numeric_limits<double>::infinity();
};

inline BlockOptimum exhaustive_blocks(const raq::BlockProblem& p, double tol = 1e-9) {
  BlockOptimum best;
  for (int tu = 1; tu <= p.budget; ++tu) {
    if (tu < p.min_T_U * (1.0 - tol)) continue;
    for (int td = 1; tu + td <= p.budget; ++td) {
      if (td < p.min_T_D * (1.0 - tol)) continue;
      bool ok = true;
      for (std::size_t k = 0; k < p.data_power.size() && ok; ++k) {
        const double spent = p.pilot_energy[k] + tu * p.data_power[k];
        const double budget = p.battery_energy > 0.0 ? p.battery_energy : td * p.harvest[k];
        ok = spent <= budget * (1.0 + tol);
      }
      if (!ok) continue;
      const double obj = p.c_u * tu + p.c_d * td;
      if (obj > best.objective) best = {true, tu, td, obj};
    }
  }
  return best;
}

/// Minimum of a GP by exhaustive search over an n^d log-spaced grid of its
/// box (every bound must be finite). Returns +inf when no grid point is
/// feasible.
inline double grid_minimum(const raq::GpProblem& P, int n) {
  const int d = P.num_vars();
  std::vector<std::vector<double>> axes(d);
  for (int i = 0; i < d; ++i) axes[i] = logspace(P.lower[i], P.upper[i], n);
  // Each monomial becomes a coefficient and one table of x_i^e_i per variable.
  struct Term {
    double coeff;
    std::vector<std::vector<double>> pow;  // [variable][grid index], empty if absent
  };
  auto tabulate = [&](const raq::Posynomial& p) {
    std::vector<Term> out;
    for (const auto& m : p.terms()) {
      Term t{m.coeff(), std::vector<std::vector<double>>(d)};
      for (const auto& [id, e] : m.exponents()) {
        for (double a : axes[id]) t.pow[id].push_back(std::pow(a, e));
      }
      out.push_back(std::move(t));
    }
    return out;
  };
  const auto objective = tabulate(P.objective);
  std::vector<std::pair<std::vector<Term>, std::vector<Term>>> cons;
  for (const auto& c : P.inequalities) cons.emplace_back(tabulate(c.lhs), tabulate(c.rhs));

  std::vector<int> idx(d, 0);
  auto eval = [&idx, d](const std::vector<Term>& terms) {
    double s = 0.0;
    for (const auto& t : terms) {
      double v = t.coeff;
      for (int i = 0; i < d; ++i) {
        if (!t.pow[i].empty()) v *= t.pow[i][idx[i]];
      }
      s += v;
    }
    return s;
  };
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    bool ok = true;
    for (const auto& [lhs, rhs] : cons) {
      if (eval(lhs) > eval(rhs)) {
        ok = false;
        break;
      }
    }
    if (ok) best = std::min(best, eval(objective));
    int i = d - 1;
    while (i >= 0 && ++idx[i] == n) idx[i--] = 0;
    if (i < 0) break;
  }
  return best;
}

/// Exhaustive optimum of the two-device MRC/MRT sum rate with alpha and the
/// blocks held at `fixed`. Pilot, data and SWIPT powers each range over an
/// n-point log grid. For each pilot pair the uplink sum rate is tabulated over
/// the data-power grid and turned into a running maximum, so that the energy
/// constraint (an upper bound on each data power) becomes a table lookup.
/// This is the same optimum a plain n^6 scan finds.
inline double two_device_grid_optimum(const raq::Scenario& sc, const raq::Allocation& fixed, int n) {
  const auto& s = sc.system;
  const int M = sc.M();
  const double rho = sc.receiver.rho, phi2 = sc.receiver.phi2, sigma2 = sc.receiver.sigma2;
  const double g = sc.rf.rho;
  const double T = s.T, TU = fixed.T_U, TD = fixed.T_D;
  const double NEG = -std::numeric_limits<double>::infinity();

  std::vector<double> pp_axis[2], pd_axis[2];
  for (int k = 0; k < 2; ++k) {
    // Largest energy any allocation could deliver (perfect CSI, full budget).
    const double b = sc.beta[k];
    const double e_max = TD / T * s.eta_eh * (1.0 - fixed.alpha[k]) * g * s.ps_max * (M + 1) * b;
    pp_axis[k] = logspace(T * e_max / s.tau * 1e-5, T * e_max / s.tau, n);
    pd_axis[k] = logspace(T * e_max / TU * 1e-5, T * e_max / TU, n);
  }
  const auto ps_axis = logspace(s.ps_max * 1e-4, s.ps_max, n);
  auto sinr_floor = [&](double rate, double prelog) { return rate > 0 ? std::exp2(T * rate / prelog) - 1 : 0.0; };

  double best = NEG;
  std::vector<double> table(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double pp[2] = {pp_axis[0][a], pp_axis[1][b]};
      double e[2], snr_pilot[2];
      for (int k = 0; k < 2; ++k) {
        snr_pilot[k] = rho * phi2 * s.tau * pp[k] * sc.beta[k] / sigma2;
        e[k] = sc.beta[k] / (1.0 + snr_pilot[k]);
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double pd[2] = {pd_axis[0][i], pd_axis[1][j]};
          const double interference = sc.beta[0] * pd[0] + sc.beta[1] * pd[1] + sigma2 / (rho * phi2);
          double r = 0.0;
          bool ok = true;
          for (int k = 0; k < 2; ++k) {
            // M pd beta^2 gamma_p / ((sum beta pd + noise) (1 + gamma_p) beta)
            const double sinr = M * pd[k] * sc.beta[k] * snr_pilot[k] / ((1.0 + snr_pilot[k]) * interference);
            ok = ok && sinr >= sinr_floor(s.rreq_u[k], TU);
            r += TU / T * std::log2(1.0 + sinr);
          }
          double v = ok ? r : NEG;
          if (i > 0) v = std::max(v, table[(i - 1) * n + j]);
          if (j > 0) v = std::max(v, table[i * n + j - 1]);
          table[i * n + j] = v;
        }
      }
      for (double p0 : ps_axis) {
        for (double p1 : ps_axis) {
          if (p0 + p1 > s.ps_max) continue;
          const double ps[2] = {p0, p1};
          double rd = 0.0;
          bool ok = true;
          int top[2];
          for (int k = 0; k < 2; ++k) {
            const double al = fixed.alpha[k], bk = sc.beta[k];
            const double gain = g * ps[k] * M * (bk - e[k]);
            const double sinr = al * gain / (al * bk * g * (p0 + p1) + al * s.sigma2_rf[k] + s.sigma2_ks[k]);
            ok = ok && sinr >= sinr_floor(s.rreq_d[k], s.bandwidth * TD);
            rd += TD / T * s.bandwidth * std::log2(1.0 + sinr);
            const double energy = TD / T * s.eta_eh * (1.0 - al) * (gain + bk * g * (p0 + p1));
            const double pd_max = (T * energy - s.tau * pp[k]) / TU;
            top[k] = static_cast<int>(std::upper_bound(pd_axis[k].begin(), pd_axis[k].end(), pd_max) -
                                      pd_axis[k].begin()) - 1;
            ok = ok && top[k] >= 0;
          }
          if (ok) best = std::max(best, table[top[0] * n + top[1]] + rd);
        }
      }
    }
  }
  return best;
}

}  // namespace oracle
