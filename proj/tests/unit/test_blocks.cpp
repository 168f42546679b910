#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "raqswipt/blocks.hpp"
#include "raqswipt/config.hpp"
#include "raqswipt/harness.hpp"

using namespace raq;

TEST_CASE("no floors and cheap harvesting: uplink takes the rest") {
  BlockProblem p;
  p.c_u = 2.0;
  p.c_d = 1.0;
  p.budget = 390;
  p.pilot_energy = {10.0};
  p.data_power = {1.0};
  p.harvest = {4.0};
  // T_U + T_D <= 390 and 10 + T_U <= 4 T_D: the LP vertex is T_U = 310, T_D = 80.
  const BlockResult r = optimize_blocks(p);
  REQUIRE(r.feasible);
  CHECK(r.T_U + r.T_D <= 390);
  CHECK(r.relaxed_T_U == doctest::Approx(310.0));
  CHECK(r.T_U == 310);
  CHECK(r.T_D == 80);
  const auto best = oracle::exhaustive_blocks(p);
  CHECK(r.objective == doctest::Approx(best.objective));
}

TEST_CASE("fractional vertex falls back to a feasible neighbour") {
  BlockProblem p;
  p.c_u = 1.0;
  p.c_d = 0.1;
  p.budget = 100;
  p.pilot_energy = {0.5};
  p.data_power = {1.0};
  p.harvest = {3.0};
  // T_U + 0.5 <= 3 T_D with T_U + T_D <= 100: vertex (74.875, 25.125).
  const BlockResult r = optimize_blocks(p);
  REQUIRE(r.feasible);
  CHECK(p.feasible(r.T_U, r.T_D));
  CHECK(r.objective == doctest::Approx(oracle::exhaustive_blocks(p).objective));
}

TEST_CASE("infeasible block problem") {
  BlockProblem p;
  p.c_u = 1.0;
  p.c_d = 1.0;
  p.budget = 10;
  p.min_T_U = 8.0;
  p.min_T_D = 8.0;
  p.pilot_energy = {0.0};
  p.data_power = {0.0};
  p.harvest = {1.0};
  CHECK_FALSE(optimize_blocks(p).feasible);
}

TEST_CASE("blocks from a default-system allocation respect the budget") {
  ConfigFile c;
  c.system.broadcast_per_device();
  const Scenario sc = make_scenario(c, draw_geometry(c, 1, 0), ReceiverKind::kRaqr);
  const auto r = solve_powers(Scheme::kMrcMrt, sc, initial_allocation(sc, Scheme::kMrcMrt, {}));
  const BlockResult b = optimize_blocks(sc, r.allocation, Scheme::kMrcMrt);
  REQUIRE(b.feasible);
  CHECK(b.T_U + b.T_D <= 390);
  const auto best = oracle::exhaustive_blocks(make_block_problem(sc, r.allocation, Scheme::kMrcMrt, {}));
  CHECK(b.objective == doctest::Approx(best.objective).epsilon(1e-12));
}
