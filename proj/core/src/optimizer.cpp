#include "raqswipt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>

#include "raqswipt/approx.hpp"
#include "raqswipt/blocks.hpp"
#include "raqswipt/errors.hpp"

namespace raq {

namespace {

constexpr double kPowerMax = 1e3;  // W, loose box for uplink powers
constexpr double kChiMin = 1e-12;
constexpr double kChiMax = 1e12;
constexpr double kThetaMax = 1.05;

Monomial var(int id, double power = 1.0) { return Monomial::variable(id, power); }
Monomial cst(double c) { return Monomial(c); }

double clampd(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

std::vector<double> uplink_sinr_floor(const Scenario& sc, int T_U) {
  std::vector<double> f(sc.K(), 0.0);
  for (int k = 0; k < sc.K(); ++k) {
    const double r = sc.system.rreq_u[k];
    if (r > 0.0) f[k] = std::exp2(sc.system.T * r / T_U) - 1.0;
  }
  return f;
}

std::vector<double> downlink_sinr_floor(const Scenario& sc, int T_D) {
  std::vector<double> f(sc.K(), 0.0);
  for (int k = 0; k < sc.K(); ++k) {
    const double r = sc.system.rreq_d[k];
    if (r > 0.0) f[k] = std::exp2(sc.system.T * r / (sc.system.bandwidth * T_D)) - 1.0;
  }
  return f;
}

BuiltGp build_gp(Scheme scheme, const Allocation& an, const Scenario& sc, const DesignVariant& v,
                 const OptimizerOptions& opt, bool homotopy) {
  const int K = sc.K();
  const int M = sc.M();
  const auto& s = sc.system;
  const auto& fe = sc.receiver;
  const double R = fe.rho * fe.phi2;
  const double s2 = fe.sigma2;
  const double g = sc.rf.rho;
  const bool zf = scheme == Scheme::kZf;
  if (zf && M <= K) throw ConfigError("ZF requires M > K");
  if (an.T_U < 1 || an.T_D < 1) throw ConfigError("blocks must be at least one symbol");
  const double gain_dim = zf ? M - K : M;

  std::vector<double> c(K);
  for (int k = 0; k < K; ++k) c[k] = s.tau * sc.beta[k] * R;

  const LinkEvaluation ev = evaluate(sc, an, scheme);
  const auto floor_u = uplink_sinr_floor(sc, an.T_U);
  const auto floor_d = downlink_sinr_floor(sc, an.T_D);

  BuiltGp b;
  GpProblem& P = b.problem;
  GpLayout& L = b.layout;
  std::vector<double>& x0 = b.anchor_point;
  auto add = [&](const std::string& name, double lo, double hi, double anchor) {
    const int id = P.add_variable(name, lo, hi);
    x0.push_back(clampd(anchor, lo, hi));
    return id;
  };
  for (int k = 0; k < K; ++k) {
    const std::string sfx = std::to_string(k);
    L.pp.push_back(add("pp" + sfx, opt.power_min, kPowerMax, an.p_pilot[k]));
    L.pd.push_back(v.equal_ul_powers ? L.pp.back()
                                     : add("pd" + sfx, opt.power_min, kPowerMax, an.p_data[k]));
    L.ps.push_back(add("ps" + sfx, opt.power_min, s.ps_max, an.p_swipt[k]));
    L.alpha.push_back(add("alpha" + sfx, opt.alpha_min, opt.alpha_max, an.alpha[k]));
    L.chi_u.push_back(add("chiu" + sfx, kChiMin, kChiMax, ev.sinr_u[k]));
    L.chi_d.push_back(add("chid" + sfx, kChiMin, kChiMax, ev.sinr_d[k]));
  }
  if (v.fixed_alpha) {
    for (int k = 0; k < K; ++k) {
      P.add_equal(var(L.alpha[k]), Monomial(x0[L.alpha[k]]), "alpha" + std::to_string(k));
    }
  }
  if (zf) {
    for (int k = 0; k < K; ++k) {
      const double xk = c[k] * x0[L.pp[k]] / s2;
      L.z.push_back(add("z" + std::to_string(k), 1.0, std::numeric_limits<double>::infinity(), 1.0 + xk));
    }
  }
  if (homotopy) {
    double ratio = kThetaMax;
    for (int k = 0; k < K; ++k) {
      if (floor_u[k] > 0) ratio = std::min(ratio, ev.sinr_u[k] / floor_u[k]);
      if (floor_d[k] > 0) ratio = std::min(ratio, ev.sinr_d[k] / floor_d[k]);
    }
    b.theta = add("theta", 1e-12, kThetaMax, ratio);
  }

  // Objective.
  if (homotopy) {
    P.objective = var(b.theta, -1.0);
  } else {
    Monomial obj(1.0);
    for (int k = 0; k < K; ++k) {
      const auto lu = log_bound(std::max(ev.sinr_u[k], kChiMin));
      const auto ld = log_bound(std::max(ev.sinr_d[k], kChiMin));
      obj *= var(L.chi_u[k], -static_cast<double>(an.T_U) / s.T * lu.zeta);
      obj *= var(L.chi_d[k], -static_cast<double>(an.T_D) / s.T * s.bandwidth * ld.zeta);
    }
    P.objective = obj;
  }

  Posynomial sum_ps;
  for (int j = 0; j < K; ++j) sum_ps += var(L.ps[j]);

  for (int k = 0; k < K; ++k) {
    const std::string sfx = std::to_string(k);
    const Posynomial den = Posynomial(c[k] * var(L.pp[k])) + cst(s2);  // c pp + s2

    // Uplink SINR.
    if (!zf) {
      Posynomial interf = cst(s2 / R);
      for (int j = 0; j < K; ++j) interf += sc.beta[j] * var(L.pd[j]);
      P.add(interf * den * var(L.chi_u[k]),
            M * c[k] * sc.beta[k] * var(L.pd[k]) * var(L.pp[k]), "sinr_u" + sfx);
    } else {
      // (sum_j pd_j e_j + s2/R) prod_j (1 + x_j) with 1 + x_j <= z_j, and
      // prod (1 + x_j) on the right replaced by its monomial minorant.
      Monomial all_z(1.0);
      for (int j = 0; j < K; ++j) all_z *= var(L.z[j]);
      Posynomial bracket = (s2 / R) * all_z;
      for (int j = 0; j < K; ++j) bracket += sc.beta[j] * var(L.pd[j]) * all_z * var(L.z[j], -1.0);
      std::vector<double> xhat(K);
      for (int j = 0; j < K; ++j) xhat[j] = c[j] * x0[L.pp[j]] / s2;
      const MonomialBound pb = product_bound(xhat);
      Monomial rhs = (M - K) * c[k] * sc.beta[k] * var(L.pd[k]) * var(L.pp[k]) * pb.delta;
      for (int j = 0; j < K; ++j) rhs *= Monomial(std::pow(c[j] / s2, pb.exponents[j]), {{L.pp[j], pb.exponents[j]}});
      P.add(bracket * den * var(L.chi_u[k]), rhs, "sinr_u" + sfx);
      P.add(Posynomial(cst(1.0)) + (c[k] / s2) * var(L.pp[k]), var(L.z[k]), "z" + sfx);
    }

    // Downlink SINR.
    const double nrf = s.sigma2_rf[k];
    const double nks = s.sigma2_ks[k];
    const Monomial sig = g * var(L.alpha[k]) * var(L.ps[k]) * gain_dim * sc.beta[k] * c[k] * var(L.pp[k]);
    if (!zf) {
      Posynomial inner = sum_ps * (sc.beta[k] * g * var(L.alpha[k]));
      inner += nrf * var(L.alpha[k]);
      inner += cst(nks);
      P.add(inner * den * var(L.chi_d[k]), sig, "sinr_d" + sfx);
    } else {
      Posynomial noise = Posynomial(nrf * var(L.alpha[k])) + cst(nks);
      Posynomial lhs = sum_ps * (sc.beta[k] * s2 * g * var(L.alpha[k]));
      lhs += noise * den;
      P.add(lhs * var(L.chi_d[k]), sig, "sinr_d" + sfx);
    }

    // Uplink energy.
    const Posynomial spent = Posynomial(s.tau * var(L.pp[k])) + an.T_U * var(L.pd[k]);
    if (v.battery_w > 0.0) {
      P.add(spent, cst(s.T * v.battery_w), "battery" + sfx);
    } else {
      // spent (c pp + s2) / (T_D eta g beta) + alpha S <= S, with S >= its
      // AM-GM monomial at the anchor.
      std::vector<double> A(K, 0.0);
      for (int j = 0; j < K; ++j) {
        if (!zf) {
          A[j] = c[k] * (1.0 + (j == k ? M : 0));
        } else if (j == k) {
          A[j] = (M - K) * c[k];
        }
      }
      Posynomial S = sum_ps * cst(s2);
      for (int j = 0; j < K; ++j) {
        if (A[j] > 0) S += A[j] * var(L.pp[k]) * var(L.ps[j]);
      }
      std::vector<double> ps_hat(K);
      for (int j = 0; j < K; ++j) ps_hat[j] = x0[L.ps[j]];
      const MonomialBound mb = amgm_bound(A, s2, ps_hat, x0[L.pp[k]]);
      std::vector<int> ids{L.pp[k]};
      ids.insert(ids.end(), L.ps.begin(), L.ps.end());
      Posynomial lhs = (spent * den) * cst(1.0 / (an.T_D * s.eta_eh * g * sc.beta[k]));
      lhs += S * var(L.alpha[k]);
      P.add(lhs, mb.to_monomial(ids), "energy" + sfx);
    }

    // Rate floors.
    if (floor_u[k] > 0) {
      Monomial lhs = floor_u[k] * var(L.chi_u[k], -1.0);
      if (homotopy) lhs *= var(b.theta);
      P.add(lhs, cst(1.0), "floor_u" + sfx);
    }
    if (floor_d[k] > 0) {
      Monomial lhs = floor_d[k] * var(L.chi_d[k], -1.0);
      if (homotopy) lhs *= var(b.theta);
      P.add(lhs, cst(1.0), "floor_d" + sfx);
    }
  }
  P.add(sum_ps, cst(s.ps_max), "budget");
  return b;
}

BuiltGp build_mrc_gp(const Allocation& anchor, const Scenario& sc, const DesignVariant& variant,
                     const OptimizerOptions& opt, bool homotopy) {
  return build_gp(Scheme::kMrcMrt, anchor, sc, variant, opt, homotopy);
}

BuiltGp build_zf_gp(const Allocation& anchor, const Scenario& sc, const DesignVariant& variant,
                    const OptimizerOptions& opt, bool homotopy) {
  return build_gp(Scheme::kZf, anchor, sc, variant, opt, homotopy);
}

Allocation extract_allocation(const GpLayout& L, std::span<const double> x, const Allocation& blocks) {
  Allocation a;
  for (std::size_t k = 0; k < L.pp.size(); ++k) {
    a.p_pilot.push_back(x[L.pp[k]]);
    a.p_data.push_back(x[L.pd[k]]);
    a.p_swipt.push_back(x[L.ps[k]]);
    a.alpha.push_back(x[L.alpha[k]]);
  }
  a.T_U = blocks.T_U;
  a.T_D = blocks.T_D;
  return a;
}

Allocation initial_allocation(const Scenario& sc, Scheme scheme, const DesignVariant& variant) {
  const auto& s = sc.system;
  const int K = sc.K();
  Allocation a;
  a.T_U = (s.T - s.tau) / 2;
  a.T_D = (s.T - s.tau) - a.T_U;
  a.p_swipt.assign(K, 0.5 * s.ps_max / K);
  a.alpha.assign(K, 0.5);
  const double total_ps = 0.5 * s.ps_max;
  for (int k = 0; k < K; ++k) {
    double p = 0.0;
    if (variant.battery_w > 0.0) {
      p = 0.25 * s.T * variant.battery_w / (s.tau + a.T_U);
    } else {
      // Harvesting bound without CSI (e = beta for MRT; the smaller end
      // point of the linear-in-e expression for ZF).
      double received = sc.beta[k] * sc.rf.rho * total_ps;
      if (scheme == Scheme::kZf) {
        received = sc.beta[k] * sc.rf.rho * std::min(total_ps, (sc.M() - K) * a.p_swipt[k]);
      }
      const double energy = static_cast<double>(a.T_D) / s.T * s.eta_eh * (1.0 - a.alpha[k]) * received;
      p = 0.25 * s.T * energy / (s.tau + a.T_U);
    }
    a.p_pilot.push_back(p);
    a.p_data.push_back(p);
  }
  return a;
}

std::string to_string(OptStatus status) {
  switch (status) {
    case OptStatus::kConverged: return "converged";
    case OptStatus::kMaxIter: return "max_iter";
    case OptStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

double anchor_norm(const Allocation& a) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.p_pilot.size(); ++k) {
    s += a.p_pilot[k] * a.p_pilot[k] + a.p_data[k] * a.p_data[k] + a.p_swipt[k] * a.p_swipt[k] +
         a.alpha[k] * a.alpha[k];
  }
  return std::sqrt(s);
}

Allocation clamp_into_box(Allocation a, const OptimizerOptions& opt, const DesignVariant& v) {
  for (std::size_t k = 0; k < a.p_pilot.size(); ++k) {
    a.p_pilot[k] = clampd(a.p_pilot[k], opt.power_min, kPowerMax);
    a.p_data[k] = v.equal_ul_powers ? a.p_pilot[k] : clampd(a.p_data[k], opt.power_min, kPowerMax);
    a.p_swipt[k] = std::max(a.p_swipt[k], opt.power_min);
    a.alpha[k] = clampd(a.alpha[k], opt.alpha_min, opt.alpha_max);
  }
  return a;
}

IterationRecord make_record(int it, const Scenario& sc, const Allocation& a, Scheme scheme,
                            const DesignVariant& v, double& sum_rate) {
  IterationRecord r;
  r.iteration = it;
  sum_rate = evaluate(sc, a, scheme).sum_rate;
  r.objective = sum_rate;
  r.max_residual = max_constraint_violation(sc, a, scheme, v.battery_w);
  r.anchor_norm = anchor_norm(a);
  return r;
}

OptimizeResult finish(OptimizeResult res, const Scenario& sc, Scheme scheme, const DesignVariant& v) {
  res.evaluation = evaluate(sc, res.allocation, scheme);
  res.sum_rate = res.evaluation.sum_rate;
  res.max_violation = max_constraint_violation(sc, res.allocation, scheme, v.battery_w);
  return res;
}

}  // namespace

OptimizeResult solve_powers(Scheme scheme, const Scenario& sc, const Allocation& init,
                            const DesignVariant& v, const OptimizerOptions& opt) {
  sc.validate();
  init.validate(sc.system);
  OptimizeResult res;
  Allocation a = clamp_into_box(init, opt, v);
  double obj = 0.0;
  res.trace.records.push_back(make_record(0, sc, a, scheme, v, obj));

  // Homotopy on the rate floors when the start misses them.
  if (res.trace.records.back().max_residual > opt.chain_tol) {
    double prev_theta = 0.0;
    bool reached = false;
    for (int h = 1; h <= opt.max_homotopy_iter && !reached; ++h) {
      const BuiltGp b = build_gp(scheme, a, sc, v, opt, true);
      const SolveResult sr = solve_gp(b.problem, b.anchor_point, opt.gp);
      ++res.trace.homotopy_iterations;
      if (sr.status == SolveStatus::kInfeasible) break;
      a = extract_allocation(b.layout, sr.x, a);
      const double theta = sr.x[b.theta];
      reached = max_constraint_violation(sc, a, scheme, v.battery_w) <= 0.0;
      if (!reached && theta - prev_theta < 1e-6 * theta) break;
      prev_theta = theta;
    }
    if (!reached) {
      res.status = OptStatus::kInfeasible;
      res.allocation = a;
      res.message = "rate floors unreachable from the start point";
      return finish(std::move(res), sc, scheme, v);
    }
    res.trace.records.push_back(make_record(0, sc, a, scheme, v, obj));
  }

  res.status = OptStatus::kMaxIter;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const BuiltGp b = build_gp(scheme, a, sc, v, opt, false);
    const double chain = std::max(0.0, b.problem.max_violation(b.anchor_point));
    res.trace.max_chain_residual = std::max(res.trace.max_chain_residual, chain);
    const SolveResult sr = solve_gp(b.problem, b.anchor_point, opt.gp);
    if (sr.status == SolveStatus::kInfeasible) {
      res.message = "approximated GP infeasible at iteration " + std::to_string(it);
      break;
    }
    const Allocation cand = extract_allocation(b.layout, sr.x, a);
    double cand_obj = 0.0;
    IterationRecord rec = make_record(it, sc, cand, scheme, v, cand_obj);
    rec.chain_residual = chain;
    rec.newton_steps = sr.iterations + sr.phase1_iterations;
    rec.gp_status = to_string(sr.status);
    if (rec.max_residual > opt.chain_tol) {
      res.message = "GP solution violates the original constraints at iteration " + std::to_string(it);
      break;
    }
    if (cand_obj < obj - 1e-9 * (1.0 + std::abs(obj))) {
      res.trace.monotone = false;
      res.message = "objective decreased at iteration " + std::to_string(it);
      break;
    }
    res.trace.records.push_back(rec);
    res.trace.iterations = it;
    const double prev = obj;
    a = cand;
    obj = cand_obj;
    if (obj - prev < opt.kappa * std::abs(prev)) {
      res.status = OptStatus::kConverged;
      res.trace.converged = true;
      break;
    }
  }
  res.allocation = a;
  return finish(std::move(res), sc, scheme, v);
}

OptimizeResult solve_mrc(const Scenario& sc, const Allocation& init, const DesignVariant& variant,
                         const OptimizerOptions& opt) {
  return solve_powers(Scheme::kMrcMrt, sc, init, variant, opt);
}

OptimizeResult solve_zf(const Scenario& sc, const Allocation& init, const DesignVariant& variant,
                        const OptimizerOptions& opt) {
  return solve_powers(Scheme::kZf, sc, init, variant, opt);
}

AlternateResult alternate(const Scenario& sc, Scheme scheme, const DesignVariant& v,
                          const OptimizerOptions& opt, int max_outer, const Allocation* init) {
  AlternateResult out;
  const Allocation start = init ? *init : initial_allocation(sc, scheme, v);
  out.result = solve_powers(scheme, sc, start, v, opt);
  out.passes = 1;
  if (out.result.status == OptStatus::kInfeasible) return out;
  out.outer_objective.push_back(out.result.sum_rate);
  for (int pass = 2; pass <= max_outer; ++pass) {
    const BlockResult blocks = optimize_blocks(sc, out.result.allocation, scheme, v);
    if (!blocks.feasible) break;
    Allocation next = out.result.allocation;
    const bool same = next.T_U == blocks.T_U && next.T_D == blocks.T_D;
    next.T_U = blocks.T_U;
    next.T_D = blocks.T_D;
    if (same) break;
    OptimizeResult r = solve_powers(scheme, sc, next, v, opt);
    if (r.status == OptStatus::kInfeasible) break;
    const double prev = out.outer_objective.back();
    if (r.sum_rate < prev - 1e-9 * (1.0 + std::abs(prev))) {
      out.monotone = false;
      break;
    }
    out.result = std::move(r);
    out.outer_objective.push_back(out.result.sum_rate);
    out.passes = pass;
    if (out.result.sum_rate - prev < opt.kappa * std::abs(prev)) break;
  }
  return out;
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
  const auto precision = out.precision(12);
  out << "iteration,objective,max_residual,chain_residual,anchor_norm,newton_steps,gp_status\n";
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << r.objective << ',' << r.max_residual << ',' << r.chain_residual
        << ',' << r.anchor_norm << ',' << r.newton_steps << ',' << r.gp_status << '\n';
  }
  out.precision(precision);
}

void write_allocation_csv(std::ostream& out, const Allocation& a) {
  const auto precision = out.precision(12);
  out << "T_U,T_D\n" << a.T_U << ',' << a.T_D << '\n';
  out << "k,p_pilot,p_data,p_swipt,alpha\n";
  for (int k = 0; k < a.K(); ++k) {
    out << k << ',' << a.p_pilot[k] << ',' << a.p_data[k] << ',' << a.p_swipt[k] << ','
        << a.alpha[k] << '\n';
  }
  out.precision(precision);
}

}  // namespace raq
