#include <doctest.h>

#include <limits>

#include "raqswipt/lp_solver.hpp"

using namespace raq;

TEST_CASE("unique vertex") {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3
  LpProblem lp = LpProblem::with_vars(2);
  lp.c << -3.0, -2.0;
  lp.add_le(Eigen::RowVector2d(1, 1), 4);
  lp.add_le(Eigen::RowVector2d(1, 3), 6);
  lp.upper(0) = 3.0;
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.x(0) == doctest::Approx(3.0));
  CHECK(r.x(1) == doctest::Approx(1.0));
  CHECK(r.objective == doctest::Approx(-11.0));
}

TEST_CASE("tied face returns the lexicographically smallest point") {
  LpProblem lp = LpProblem::with_vars(2);
  lp.c << -1.0, -1.0;
  lp.add_le(Eigen::RowVector2d(1, 1), 390);
  lp.lower << 1.0, 1.0;
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.x(0) + r.x(1) == doctest::Approx(390.0));
  CHECK(r.x(0) == doctest::Approx(1.0));
}

TEST_CASE("equalities, negative right-hand sides, infeasible and unbounded") {
  LpProblem lp = LpProblem::with_vars(2);
  lp.c << 1.0, 2.0;
  lp.add_eq(Eigen::RowVector2d(1, 1), 5);
  lp.add_le(Eigen::RowVector2d(-1, 0), -2);  // x >= 2
  auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.x(0) == doctest::Approx(5.0));
  CHECK(r.x(1) == doctest::Approx(0.0));

  LpProblem bad = LpProblem::with_vars(1);
  bad.c << 1.0;
  bad.add_le(Eigen::RowVectorXd::Constant(1, 1.0), -1.0);
  CHECK(solve_lp(bad).status == LpStatus::kInfeasible);

  LpProblem open = LpProblem::with_vars(1);
  open.c << -1.0;
  CHECK(solve_lp(open).status == LpStatus::kUnbounded);
}
