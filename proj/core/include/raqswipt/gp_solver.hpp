#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "raqswipt/posynomial.hpp"

namespace raq {

/// f(y) = log sum_i exp(a_i . y + b_i) with sparse rows. A single row is
/// affine.
class LseFunction {
 public:
  struct Row {
    std::vector<std::pair<int, double>> a;
    double b = 0.0;
  };

  LseFunction() = default;
  explicit LseFunction(std::vector<Row> rows);

  const std::vector<Row>& rows() const { return rows_; }
  /// Variables with a nonzero coefficient in any row, ascending.
  const std::vector<int>& support() const { return support_; }
  bool affine() const { return rows_.size() == 1; }

  double value(const Eigen::VectorXd& y) const;
  /// Value, gradient and Hessian restricted to support().
  double evaluate(const Eigen::VectorXd& y, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const;

 private:
  std::vector<Row> rows_;
  std::vector<int> support_;
  std::vector<std::vector<std::pair<int, double>>> local_;  // rows in support-local ids
};

/// minimize F0(y) s.t. F_i(y) <= 0, A y = b.
struct ConvexProgram {
  int n = 0;
  LseFunction objective;
  std::vector<LseFunction> inequalities;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
};

/// Log-variable image of a GP with y = log(x / scale). Box bounds become
/// affine inequalities after the problem's own inequalities. An empty
/// `scale` means all ones.
ConvexProgram to_convex(const GpProblem& problem, std::span<const double> scale = {});

enum class SolveStatus { kOptimal, kInfeasible, kMaxIter };

std::string to_string(SolveStatus status);

struct GpSolverOptions {
  double gap_tol = 1e-10;       // surrogate duality gap, relative to 1 + |F0|
  double feas_tol = 1e-9;       // dual residual (KKT stationarity), infinity norm
  double mu = 10.0;             // t = mu m / gap at each step
  double t0 = 1.0;              // initial multipliers -1 / (t0 F_i)
  double hessian_reg = 1e-10;
  int max_newton = 500;         // total Newton steps over both phases
};

/// One accepted primal-dual step: the residual norm ||r_t|| before and
/// after, at the step's t.
struct MeritStep {
  double t = 0.0;
  double before = 0.0;
  double after = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kMaxIter;
  std::vector<double> x;
  std::vector<double> multipliers;  // one per convex inequality (problem rows, then box)
  double objective = 0.0;       // posynomial objective at x
  double kkt_residual = 0.0;    // ||Z^T (grad F0 + sum lambda_i grad F_i)||_inf
  double duality_gap = 0.0;     // sum lambda_i (-F_i), in the log objective
  double max_violation = 0.0;   // GpProblem::max_violation at x
  double phase1_value = 0.0;    // slack reached when phase I ran
  int iterations = 0;           // Newton steps, main phase
  int phase1_iterations = 0;
  std::vector<MeritStep> merit_trace;
  std::string message;
};

/// Primal-dual interior-point solve in log variables. `x0` is the scaling point and start; it
/// need not be feasible (phase I runs when it is not strictly feasible).
SolveResult solve_gp(const GpProblem& problem, std::span<const double> x0 = {},
                     const GpSolverOptions& options = {});

}  // namespace raq
