#include "raqswipt/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace raq {

bool BlockProblem::feasible(double T_U, double T_D, double tol) const {
  if (T_U < 1.0 || T_D < 1.0) return false;
  if (T_U < min_T_U * (1.0 - tol) || T_D < min_T_D * (1.0 - tol)) return false;
  if (T_U + T_D > budget + tol) return false;
  for (std::size_t k = 0; k < data_power.size(); ++k) {
    const double spent = pilot_energy[k] + T_U * data_power[k];
    const double available = battery_energy > 0.0 ? battery_energy : T_D * harvest[k];
    if (spent > available * (1.0 + tol)) return false;
  }
  return true;
}

BlockProblem make_block_problem(const Scenario& sc, const Allocation& a, Scheme scheme,
                                const DesignVariant& v) {
  const auto& s = sc.system;
  const LinkEvaluation ev = evaluate(sc, a, scheme);
  BlockProblem p;
  p.budget = s.T - s.tau;
  if (v.battery_w > 0.0) p.battery_energy = s.T * v.battery_w;
  for (int k = 0; k < sc.K(); ++k) {
    const double lu = std::log2(1.0 + ev.sinr_u[k]);
    const double ld = s.bandwidth * std::log2(1.0 + ev.sinr_d[k]);
    p.c_u += lu / s.T;
    p.c_d += ld / s.T;
    if (s.rreq_u[k] > 0) p.min_T_U = std::max(p.min_T_U, s.T * s.rreq_u[k] / lu);
    if (s.rreq_d[k] > 0) p.min_T_D = std::max(p.min_T_D, s.T * s.rreq_d[k] / ld);
    p.pilot_energy.push_back(s.tau * a.p_pilot[k]);
    p.data_power.push_back(a.p_data[k]);
    // Energy per downlink symbol: T E_k / T_D.
    p.harvest.push_back(a.T_D > 0 ? s.T * ev.energy[k] / a.T_D : 0.0);
  }
  return p;
}

BlockResult optimize_blocks(const BlockProblem& bp) {
  BlockResult out;
  if (!std::isfinite(bp.min_T_U) || !std::isfinite(bp.min_T_D)) return out;
  LpProblem lp = LpProblem::with_vars(2);
  lp.c << -bp.c_u, -bp.c_d;
  lp.lower << bp.min_T_U, bp.min_T_D;
  lp.add_le(Eigen::RowVector2d(1.0, 1.0), bp.budget);
  for (std::size_t k = 0; k < bp.data_power.size(); ++k) {
    if (bp.battery_energy > 0.0) {
      lp.add_le(Eigen::RowVector2d(bp.data_power[k], 0.0), bp.battery_energy - bp.pilot_energy[k]);
    } else {
      lp.add_le(Eigen::RowVector2d(bp.data_power[k], -bp.harvest[k]), -bp.pilot_energy[k]);
    }
  }
  const LpResult r = solve_lp(lp);
  if (r.status != LpStatus::kOptimal) return out;
  out.relaxed_T_U = r.x(0);
  out.relaxed_T_D = r.x(1);

  const double tu = std::floor(r.x(0) + 0.5);
  const double td = std::round(r.x(1));
  if (bp.feasible(tu, td)) {
    out.feasible = true;
    out.T_U = static_cast<int>(tu);
    out.T_D = static_cast<int>(td);
  } else {
    double best = -std::numeric_limits<double>::infinity();
    for (double cu : {std::ceil(r.x(0)), std::floor(r.x(0))}) {
      for (double cd : {std::ceil(r.x(1)), std::floor(r.x(1))}) {
        const double obj = bp.objective(cu, cd);
        if (bp.feasible(cu, cd) && obj > best) {
          best = obj;
          out.feasible = true;
          out.T_U = static_cast<int>(cu);
          out.T_D = static_cast<int>(cd);
        }
      }
    }
    out.used_fallback = true;
    if (!out.feasible) {
      // For fixed T_U the objective and every constraint favor the largest
      // T_D, so a scan over T_U alone is exhaustive.
      for (int u = 1; u < bp.budget; ++u) {
        const int d = bp.budget - u;
        const double obj = bp.objective(u, d);
        if (bp.feasible(u, d) && obj > best) {
          best = obj;
          out.feasible = true;
          out.T_U = u;
          out.T_D = d;
        }
      }
    }
  }
  if (out.feasible) out.objective = bp.objective(out.T_U, out.T_D);
  return out;
}

BlockResult optimize_blocks(const Scenario& sc, const Allocation& a, Scheme scheme,
                            const DesignVariant& v) {
  return optimize_blocks(make_block_problem(sc, a, scheme, v));
}

}  // namespace raq
