#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "raqswipt/gp_solver.hpp"

using namespace raq;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
Monomial v(int id, double p = 1.0) { return Monomial::variable(id, p); }
}  // namespace

TEST_CASE("single monomial constraint becomes affine") {
  GpProblem P;
  P.add_variable("x", 1e-3, kInf);
  P.add_variable("y", 1e-3, kInf);
  P.objective = v(0);
  P.add(Posynomial(3.0 * v(0, 2.0) * v(1, -1.0)), Monomial(1.0));
  const ConvexProgram cp = to_convex(P);
  CHECK(cp.inequalities[0].affine());
  const auto& row = cp.inequalities[0].rows()[0];
  CHECK(row.b == doctest::Approx(std::log(3.0)));
  CHECK(row.a.size() == 2);
}

TEST_CASE("log transform reproduces residuals") {
  GpProblem P;
  P.add_variable("x", 0.1, 10.0);
  P.add_variable("y", 0.1, 10.0);
  P.objective = v(0) * v(1, -1.0);
  P.add(Posynomial(v(0)) + Posynomial(2.0 * v(1, 0.5) * v(0, -1.0)), 3.0 * v(1));
  const std::vector<double> scale{2.0, 0.5};
  const ConvexProgram cp = to_convex(P, scale);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const std::vector<double> x{std::exp(u(rng)), std::exp(u(rng))};
    Eigen::VectorXd y(2);
    for (int j = 0; j < 2; ++j) y(j) = std::log(x[j] / scale[j]);
    const double ratio = P.inequalities[0].lhs.eval(x) / P.inequalities[0].rhs.eval(x);
    CHECK(std::exp(cp.inequalities[0].value(y)) == doctest::Approx(ratio).epsilon(1e-12));
    CHECK(std::exp(cp.objective.value(y)) == doctest::Approx(P.objective.eval(x)).epsilon(1e-12));
  }
}

TEST_CASE("minimize x subject to 2/x <= 1") {
  GpProblem P;
  P.add_variable("x", 1e-6, 1e6);
  P.objective = v(0);
  P.add(Posynomial(2.0 * v(0, -1.0)), Monomial(1.0));
  const auto r = solve_gp(P, std::vector<double>{100.0});
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(r.kkt_residual < 1e-6);
}

TEST_CASE("objective pushes to the box corner") {
  GpProblem P;
  P.add_variable("x", 1e-3, 2.0);
  P.add_variable("y", 1e-3, 3.0);
  P.objective = v(0, -1.0) * v(1, -1.0);
  const auto r = solve_gp(P, std::vector<double>{0.5, 0.5});
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(1.0 / 6.0).epsilon(1e-7));
  CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(r.x[1] == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("infeasible start triggers phase I") {
  GpProblem P;
  P.add_variable("x", 1e-3, 1e3);
  P.add_variable("y", 1e-3, 1e3);
  P.objective = v(0) + Posynomial(v(1));
  P.add(Posynomial(v(0, -1.0) * v(1, -1.0)), Monomial(1.0));  // xy >= 1
  const auto r = solve_gp(P, std::vector<double>{0.01, 0.01});
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.phase1_iterations > 0);
  CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("equality constraints") {
  GpProblem P;
  P.add_variable("x", 1e-3, 1e3);
  P.add_variable("y", 1e-3, 1e3);
  P.objective = v(0) + Posynomial(v(1));
  P.add_equal(v(0) * v(1), Monomial(4.0));
  const auto r = solve_gp(P, std::vector<double>{1.0, 1.0});
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("infeasible problem is reported") {
  GpProblem P;
  P.add_variable("x", 1e-3, 1e3);
  P.objective = v(0);
  P.add(Posynomial(v(0)), Monomial(0.5));
  P.add(Posynomial(v(0, -1.0)), Monomial(0.5));  // x <= 0.5 and x >= 2
  const auto r = solve_gp(P, std::vector<double>{1.0});
  CHECK(r.status == SolveStatus::kInfeasible);
}

TEST_CASE("small GP against a fine log grid") {
  GpProblem P;
  P.add_variable("x", 0.5, 2.0);
  P.add_variable("y", 0.5, 2.0);
  P.objective = v(0, -0.3) * v(1, -0.2);
  P.add(Posynomial(0.4 * v(0)) + Posynomial(0.3 * v(0, 0.5) * v(1)), Monomial(1.0));
  const auto r = solve_gp(P, std::vector<double>{0.6, 0.6});
  REQUIRE(r.status == SolveStatus::kOptimal);
  const double grid = oracle::grid_minimum(P, 400);
  CHECK(r.objective <= grid * (1.0 + 1e-9));
  CHECK(r.objective == doctest::Approx(grid).epsilon(0.005));
}
