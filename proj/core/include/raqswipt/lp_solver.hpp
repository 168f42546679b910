#pragma once

#include <string>

#include <Eigen/Dense>

namespace raq {

/// minimize c.x s.t. A_le x <= b_le, A_eq x = b_eq, lower <= x <= upper.
/// Lower bounds must be finite; upper bounds may be +inf.
struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd A_le;
  Eigen::VectorXd b_le;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  /// n variables in [0, +inf) with no constraints.
  static LpProblem with_vars(int n);
  int num_vars() const { return static_cast<int>(c.size()); }
  void add_le(const Eigen::RowVectorXd& row, double rhs);
  void add_eq(const Eigen::RowVectorXd& row, double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string to_string(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  int pivots = 0;
};

/// Two-phase simplex with Bland's rule. Among optimal points the
/// lexicographically smallest is returned (ties broken by successive LPs),
/// so degenerate problems have a reproducible answer.
LpResult solve_lp(const LpProblem& problem);

}  // namespace raq
