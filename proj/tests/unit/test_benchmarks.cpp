#include <doctest.h>

#include "raqswipt/benchmarks.hpp"
#include "raqswipt/config.hpp"
#include "raqswipt/errors.hpp"
#include "raqswipt/harness.hpp"
#include "raqswipt/units.hpp"

using namespace raq;

TEST_CASE("benchmark names") {
  for (auto k : all_benchmarks()) CHECK(parse_benchmark(to_string(k)) == k);
  CHECK_THROWS_AS(parse_benchmark("nope"), ConfigError);
}

TEST_CASE("benchmark scenario and variant") {
  ConfigFile c;
  c.system.broadcast_per_device();
  const Scenario sc = make_scenario(c, draw_geometry(c, 1, 0), ReceiverKind::kRaqr);
  BenchmarkSpec rf{BenchmarkKind::kRfFullOpt, std::nullopt, 0.0};
  CHECK(benchmark_scenario(rf, sc).receiver.kind == ReceiverKind::kRf);
  CHECK(benchmark_variant(rf, sc).battery_w == doctest::Approx(dbm_to_watt(5.0)));
  BenchmarkSpec eq{BenchmarkKind::kEqualUlPowers, std::nullopt, 0.0};
  CHECK(benchmark_scenario(eq, sc).receiver.kind == ReceiverKind::kRaqr);
  CHECK(benchmark_variant(eq, sc).equal_ul_powers);
  CHECK(benchmark_variant(eq, sc).battery_w == 0.0);
}

TEST_CASE("proposed design dominates its restriction") {
  ConfigFile c;
  c.system.broadcast_per_device();
  for (int i = 0; i < 2; ++i) {
    const Scenario sc = make_scenario(c, draw_geometry(c, 1, i), ReceiverKind::kRaqr);
    const auto all = run_all_benchmarks(sc, Scheme::kMrcMrt);
    REQUIRE(all.size() == 4);
    CHECK(all[0].kind == BenchmarkKind::kProposed);
    CHECK(all[1].kind == BenchmarkKind::kEqualUlPowers);
    CHECK(all[0].sum_rate >= all[1].sum_rate - 1e-9);
    for (const auto& b : all) {
      CHECK(b.status != OptStatus::kInfeasible);
      CHECK(b.max_violation <= 1e-8);
    }
    // Equal powers really are equal.
    for (int k = 0; k < sc.K(); ++k) CHECK(all[1].allocation.p_pilot[k] == all[1].allocation.p_data[k]);
  }
}
