#pragma once

#include "raqswipt/lp_solver.hpp"
#include "raqswipt/optimizer.hpp"

namespace raq {

struct BlockResult {
  bool feasible = false;
  int T_U = 0;
  int T_D = 0;
  double relaxed_T_U = 0.0;
  double relaxed_T_D = 0.0;
  double objective = 0.0;  // sum rate at the integer blocks
  bool used_fallback = false;
};

/// Linear coefficients of the block problem at fixed powers and alpha.
struct BlockProblem {
  double c_u = 0.0;  // sum-rate gain per uplink symbol
  double c_d = 0.0;  // sum-rate gain per downlink symbol
  double min_T_U = 1.0;
  double min_T_D = 1.0;
  int budget = 0;    // T - tau
  // Per device: pilot_energy + T_U * data_power <= T_D * harvest (harvest
  // mode) or <= battery_energy (battery mode).
  std::vector<double> pilot_energy, data_power, harvest;
  double battery_energy = 0.0;  // > 0 selects battery mode

  bool feasible(double T_U, double T_D, double tol = 1e-9) const;
  double objective(double T_U, double T_D) const { return c_u * T_U + c_d * T_D; }
};

BlockProblem make_block_problem(const Scenario& sc, const Allocation& a, Scheme scheme,
                                const DesignVariant& variant);

/// LP relaxation, then nearest-integer rounding (ties toward larger T_U).
/// If that point is infeasible the best feasible of the {floor, ceil}^2
/// neighbors is taken, and failing that a scan over integer T_U.
BlockResult optimize_blocks(const BlockProblem& problem);

BlockResult optimize_blocks(const Scenario& sc, const Allocation& a, Scheme scheme,
                            const DesignVariant& variant = {});

}  // namespace raq
