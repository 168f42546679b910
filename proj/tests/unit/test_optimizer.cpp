#include <doctest.h>

#include <cmath>
#include <sstream>

#include "raqswipt/config.hpp"
#include "raqswipt/harness.hpp"
#include "raqswipt/optimizer.hpp"

using namespace raq;

namespace {

ConfigFile default_config() {
  ConfigFile c;
  c.system.broadcast_per_device();
  return c;
}

Scenario drop(const ConfigFile& c, int index) {
  return make_scenario(c, draw_geometry(c, 1, index), ReceiverKind::kRaqr);
}

}  // namespace

TEST_CASE("single device: chi equals the SINR at the GP solution") {
  ConfigFile c = default_config();
  c.system.K = 1;
  c.system.tau = 1;
  c.system.rreq_u.clear();
  c.system.rreq_d.clear();
  c.system.sigma2_rf.clear();
  c.system.sigma2_ks.clear();
  c.system.broadcast_per_device();
  const Scenario sc = drop(c, 0);
  for (Scheme scheme : {Scheme::kMrcMrt, Scheme::kZf}) {
    const Allocation a = initial_allocation(sc, scheme, {});
    const BuiltGp b = build_gp(scheme, a, sc, {}, {});
    const SolveResult r = solve_gp(b.problem, b.anchor_point);
    REQUIRE(r.status == SolveStatus::kOptimal);
    const Allocation got = extract_allocation(b.layout, r.x, a);
    const auto ev = evaluate(sc, got, scheme);
    if (scheme == Scheme::kMrcMrt) {
      CHECK(r.x[b.layout.chi_u[0]] == doctest::Approx(ev.sinr_u[0]).epsilon(1e-6));
    } else {
      // The ZF uplink goes through the (1 + x) monomial minorant, which is
      // loose once the pilot power moves far from the anchor.
      CHECK(r.x[b.layout.chi_u[0]] <= ev.sinr_u[0] * (1.0 + 1e-9));
    }
    CHECK(r.x[b.layout.chi_d[0]] == doctest::Approx(ev.sinr_d[0]).epsilon(1e-6));
  }
}

TEST_CASE("built GP holds at its anchor and drops zero floors") {
  ConfigFile c = default_config();
  const Scenario sc = drop(c, 3);
  for (Scheme scheme : {Scheme::kMrcMrt, Scheme::kZf}) {
    const auto res = solve_powers(scheme, sc, initial_allocation(sc, scheme, {}));
    REQUIRE(res.status == OptStatus::kConverged);
    const BuiltGp b = build_gp(scheme, res.allocation, sc, {}, {});
    CHECK(b.problem.max_violation(b.anchor_point) <= 1e-9);
    CHECK_NOTHROW(b.problem.validate());
  }
  ConfigFile free = c;
  free.system.rreq_u.assign(10, 0.0);
  free.system.rreq_d.assign(10, 0.0);
  const Scenario sf = drop(free, 3);
  const BuiltGp with = build_gp(Scheme::kMrcMrt, initial_allocation(sc, Scheme::kMrcMrt, {}), sc, {}, {});
  const BuiltGp without = build_gp(Scheme::kMrcMrt, initial_allocation(sf, Scheme::kMrcMrt, {}), sf, {}, {});
  CHECK(without.problem.inequalities.size() + 20 == with.problem.inequalities.size());
}

TEST_CASE("optimizer traces are monotone and end feasible") {
  const ConfigFile c = default_config();
  for (int i = 0; i < 3; ++i) {
    const Scenario sc = drop(c, i);
    for (Scheme scheme : {Scheme::kMrcMrt, Scheme::kZf}) {
      const auto r = solve_powers(scheme, sc, initial_allocation(sc, scheme, {}));
      CHECK(r.status == OptStatus::kConverged);
      CHECK(r.trace.monotone);
      CHECK(r.trace.iterations <= 10);
      CHECK(r.max_violation <= 1e-8);
      CHECK(r.trace.max_chain_residual <= 1e-8);
      for (std::size_t j = 1; j < r.trace.records.size(); ++j) {
        CHECK(r.trace.records[j].objective >= r.trace.records[j - 1].objective - 1e-9);
      }
    }
  }
}

TEST_CASE("ZF with near-perfect CSI approaches the perfect-CSI rate") {
  ConfigFile c = default_config();
  c.raqr.rho *= 1e6;  // pilot SNR so high that e_k is negligible
  const Scenario sc = drop(c, 0);
  const auto r = solve_powers(Scheme::kZf, sc, initial_allocation(sc, Scheme::kZf, {}));
  REQUIRE(r.status != OptStatus::kInfeasible);
  const auto& a = r.allocation;
  const auto& fe = sc.receiver;
  for (int k = 0; k < sc.K(); ++k) {
    CHECK(r.evaluation.e[k] < 1e-3 * sc.beta[k]);
    const double perfect = static_cast<double>(a.T_U) / sc.system.T *
                           std::log2(1.0 + (sc.M() - sc.K()) * fe.rho * fe.phi2 * a.p_data[k] * sc.beta[k] / fe.sigma2);
    CHECK(r.evaluation.rate_u[k] == doctest::Approx(perfect).epsilon(0.05));
  }
}

TEST_CASE("alternation never lowers the objective") {
  const ConfigFile c = default_config();
  const Scenario sc = drop(c, 4);
  const auto alt = alternate(sc, Scheme::kMrcMrt);
  CHECK(alt.monotone);
  CHECK(alt.passes <= 5);
  for (std::size_t i = 1; i < alt.outer_objective.size(); ++i) {
    CHECK(alt.outer_objective[i] >= alt.outer_objective[i - 1] - 1e-9);
  }
  // Restarting from the answer changes nothing worth another pass.
  const auto again = alternate(sc, Scheme::kMrcMrt, {}, {}, 20, &alt.result.allocation);
  CHECK(again.passes <= 2);
  CHECK(again.result.sum_rate == doctest::Approx(alt.result.sum_rate).epsilon(0.01));
}

TEST_CASE("trace and allocation CSV") {
  const ConfigFile c = default_config();
  const Scenario sc = drop(c, 0);
  const auto r = solve_powers(Scheme::kMrcMrt, sc, initial_allocation(sc, Scheme::kMrcMrt, {}));
  std::ostringstream t, a;
  write_trace_csv(t, r.trace);
  write_allocation_csv(a, r.allocation);
  CHECK(t.str().find("iteration") != std::string::npos);
  CHECK(a.str().find("T_U") != std::string::npos);
}
