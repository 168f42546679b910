#pragma once

#include <string>
#include <vector>

#include "raqswipt/gp_solver.hpp"
#include "raqswipt/posynomial.hpp"
#include "raqswipt/rates.hpp"
#include "raqswipt/scenario.hpp"

namespace raq {

/// Restrictions of the joint design used by the proposed scheme and the
/// benchmarks.
struct DesignVariant {
  bool equal_ul_powers = false;  // tie p^p_k = p^d_k
  double battery_w = 0.0;        // > 0: fixed uplink budget instead of harvested energy
  bool fixed_alpha = false;      // keep the anchor's power-splitting ratios
};

struct OptimizerOptions {
  double kappa = 0.01;
  int max_iter = 50;
  double alpha_min = 1e-6;
  double alpha_max = 1.0 - 1e-6;
  double power_min = 1e-12;     // W, GP variables must stay positive
  double chain_tol = 1e-8;
  int max_homotopy_iter = 50;
  GpSolverOptions gp;
};

/// Variable ids of one GP. `z` is only used by the ZF uplink rewrite.
struct GpLayout {
  std::vector<int> pp, pd, ps, alpha, chi_u, chi_d, z;
};

struct BuiltGp {
  GpProblem problem;
  GpLayout layout;
  /// The anchor mapped to GP variables, with chi at the true SINR and z at
  /// 1 + tau gamma; every built constraint holds there up to rounding.
  std::vector<double> anchor_point;
  /// Rate-floor scale variable when building the homotopy problem, else -1.
  int theta = -1;
};

/// Approximated GP around `anchor` (powers, alpha and blocks). The blocks
/// stay fixed. With `homotopy` the rate floors are scaled by a variable theta
/// in (0, 1.05] and the objective maximizes theta instead of the sum rate.
BuiltGp build_mrc_gp(const Allocation& anchor, const Scenario& sc, const DesignVariant& variant,
                     const OptimizerOptions& opt, bool homotopy = false);
BuiltGp build_zf_gp(const Allocation& anchor, const Scenario& sc, const DesignVariant& variant,
                    const OptimizerOptions& opt, bool homotopy = false);
BuiltGp build_gp(Scheme scheme, const Allocation& anchor, const Scenario& sc,
                 const DesignVariant& variant, const OptimizerOptions& opt, bool homotopy = false);

/// Reads powers and alpha from a GP solution; blocks are copied from `blocks`.
Allocation extract_allocation(const GpLayout& layout, std::span<const double> x,
                              const Allocation& blocks);

/// Deterministic start: uniform p^s = 0.5 Ps_max / K, alpha = 0.5, equal
/// blocks, and uplink powers at a quarter of a CSI-free harvesting bound.
Allocation initial_allocation(const Scenario& sc, Scheme scheme, const DesignVariant& variant);

/// Uplink rate floors as SINR floors 2^{T R / T_U} - 1 (and downlink alike).
std::vector<double> uplink_sinr_floor(const Scenario& sc, int T_U);
std::vector<double> downlink_sinr_floor(const Scenario& sc, int T_D);

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;     // true sum rate (bit/s/Hz)
  double max_residual = 0.0;  // violation of the original constraints
  double chain_residual = 0.0;  // previous point in the new GP; 0 on the first row
  double anchor_norm = 0.0;   // Euclidean norm of (p^p, p^d, p^s, alpha)
  int newton_steps = 0;
  std::string gp_status;
};

struct IterationTrace {
  std::vector<IterationRecord> records;  // row 0 is the start point
  int iterations = 0;                    // GP solves after any homotopy
  int homotopy_iterations = 0;
  bool converged = false;
  double max_chain_residual = 0.0;
  bool monotone = true;
};

enum class OptStatus { kConverged, kMaxIter, kInfeasible };

std::string to_string(OptStatus status);

struct OptimizeResult {
  OptStatus status = OptStatus::kInfeasible;
  Allocation allocation;
  LinkEvaluation evaluation;
  IterationTrace trace;
  double sum_rate = 0.0;
  double max_violation = 0.0;  // original constraints at the returned allocation
  std::string message;
};

/// Successive monomial approximation with fixed blocks. `init` must carry
/// the blocks; its powers are the first anchor.
OptimizeResult solve_powers(Scheme scheme, const Scenario& sc, const Allocation& init,
                            const DesignVariant& variant = {}, const OptimizerOptions& opt = {});
OptimizeResult solve_mrc(const Scenario& sc, const Allocation& init,
                         const DesignVariant& variant = {}, const OptimizerOptions& opt = {});
OptimizeResult solve_zf(const Scenario& sc, const Allocation& init,
                        const DesignVariant& variant = {}, const OptimizerOptions& opt = {});

struct AlternateResult {
  OptimizeResult result;
  std::vector<double> outer_objective;  // sum rate after each pass
  int passes = 0;
  bool monotone = true;
};

/// Alternates the power design and the block LP until the sum-rate increment
/// drops below kappa. Starts from `init` when given, else from
/// initial_allocation().
AlternateResult alternate(const Scenario& sc, Scheme scheme, const DesignVariant& variant = {},
                          const OptimizerOptions& opt = {}, int max_outer = 20,
                          const Allocation* init = nullptr);

/// Trace CSV (iteration, objective, residuals, anchor norm) and allocation
/// CSV (T_U, T_D header row, then k, p^p, p^d, p^s, alpha).
void write_trace_csv(std::ostream& out, const IterationTrace& trace);
void write_allocation_csv(std::ostream& out, const Allocation& a);

}  // namespace raq
