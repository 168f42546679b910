#include <benchmark/benchmark.h>

#include "raqswipt/benchmarks.hpp"
#include "raqswipt/config.hpp"
#include "raqswipt/harness.hpp"
#include "raqswipt/monte_carlo.hpp"
#include "raqswipt/optimizer.hpp"

namespace {

raq::Scenario defaults() {
  raq::ConfigFile c;
  c.system.broadcast_per_device();
  return raq::make_scenario(c, raq::draw_geometry(c, 1, 0), raq::ReceiverKind::kRaqr);
}

void BM_SolveGp(benchmark::State& state) {
  const auto scheme = static_cast<raq::Scheme>(state.range(0));
  const raq::Scenario sc = defaults();
  const raq::BuiltGp b = raq::build_gp(scheme, raq::initial_allocation(sc, scheme, {}), sc, {}, {});
  for (auto _ : state) {
    auto r = raq::solve_gp(b.problem, b.anchor_point);
    benchmark::DoNotOptimize(r.objective);
  }
}
BENCHMARK(BM_SolveGp)->Arg(static_cast<int>(raq::Scheme::kMrcMrt))->Arg(static_cast<int>(raq::Scheme::kZf))
    ->Unit(benchmark::kMillisecond);

void BM_SolvePowers(benchmark::State& state) {
  const auto scheme = static_cast<raq::Scheme>(state.range(0));
  const raq::Scenario sc = defaults();
  const raq::Allocation init = raq::initial_allocation(sc, scheme, {});
  for (auto _ : state) {
    auto r = raq::solve_powers(scheme, sc, init);
    benchmark::DoNotOptimize(r.sum_rate);
  }
}
BENCHMARK(BM_SolvePowers)->Arg(static_cast<int>(raq::Scheme::kMrcMrt))->Arg(static_cast<int>(raq::Scheme::kZf))
    ->Unit(benchmark::kMillisecond);

void BM_McUplink(benchmark::State& state) {
  const auto scheme = static_cast<raq::Scheme>(state.range(0));
  const raq::Scenario sc = defaults();
  const raq::Allocation a = raq::initial_allocation(sc, scheme, {});
  raq::McOptions opt;
  opt.trials = 1000;
  opt.threads = 1;
  for (auto _ : state) {
    auto r = raq::mc_ergodic_uplink(scheme, sc, a, opt);
    benchmark::DoNotOptimize(r.rate.data());
  }
  state.SetItemsProcessed(state.iterations() * opt.trials);
}
BENCHMARK(BM_McUplink)->Arg(static_cast<int>(raq::Scheme::kMrcMrt))->Arg(static_cast<int>(raq::Scheme::kZf))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
