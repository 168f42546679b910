#include "raqswipt/benchmarks.hpp"

#include "raqswipt/errors.hpp"
#include "raqswipt/units.hpp"

namespace raq {

std::string to_string(BenchmarkKind kind) {
  switch (kind) {
    case BenchmarkKind::kProposed: return "proposed";
    case BenchmarkKind::kEqualUlPowers: return "equal_ul";
    case BenchmarkKind::kRfFullOpt: return "rf_full";
    case BenchmarkKind::kRfEqualUl: return "rf_equal_ul";
  }
  return "unknown";
}

BenchmarkKind parse_benchmark(const std::string& text) {
  for (auto k : all_benchmarks()) {
    if (to_string(k) == text) return k;
  }
  throw ConfigError("unknown benchmark '" + text + "'");
}

std::vector<BenchmarkKind> all_benchmarks() {
  return {BenchmarkKind::kProposed, BenchmarkKind::kEqualUlPowers, BenchmarkKind::kRfFullOpt,
          BenchmarkKind::kRfEqualUl};
}

namespace {

BenchmarkSpec spec_of(BenchmarkKind kind) {
  BenchmarkSpec s;
  s.kind = kind;
  return s;
}

bool is_rf(BenchmarkKind k) { return k == BenchmarkKind::kRfFullOpt || k == BenchmarkKind::kRfEqualUl; }

}  // namespace

Scenario benchmark_scenario(const BenchmarkSpec& spec, const Scenario& sc) {
  Scenario out = sc;
  if (spec.frontend) {
    out.receiver = *spec.frontend;
  } else if (is_rf(spec.kind)) {
    out.receiver = sc.rf;
  }
  return out;
}

DesignVariant benchmark_variant(const BenchmarkSpec& spec, const Scenario& sc) {
  DesignVariant v;
  v.equal_ul_powers =
      spec.kind == BenchmarkKind::kEqualUlPowers || spec.kind == BenchmarkKind::kRfEqualUl;
  if (is_rf(spec.kind)) {
    v.battery_w = spec.battery_w > 0.0 ? spec.battery_w : dbm_to_watt(sc.system.battery_dbm);
  }
  return v;
}

BenchmarkResult run_benchmark(const BenchmarkSpec& spec, const Scenario& sc, Scheme scheme,
                              const OptimizerOptions& opt, const Allocation* warm_start) {
  const Scenario bs = benchmark_scenario(spec, sc);
  const DesignVariant v = benchmark_variant(spec, sc);
  const AlternateResult alt = alternate(bs, scheme, v, opt, 20, warm_start);
  BenchmarkResult r;
  r.kind = spec.kind;
  r.status = alt.result.status;
  r.allocation = alt.result.allocation;
  r.evaluation = alt.result.evaluation;
  r.sum_rate = alt.result.sum_rate;
  r.max_violation = alt.result.max_violation;
  r.outer_passes = alt.passes;
  r.inner_iterations = alt.result.trace.iterations;
  r.monotone = alt.monotone && alt.result.trace.monotone;
  r.report.scenario_id = to_string(spec.kind);
  r.report.scheme = scheme;
  r.report.rate_u_lb = r.evaluation.rate_u;
  r.report.rate_d_lb = r.evaluation.rate_d;
  r.report.energy_lb = r.evaluation.energy;
  return r;
}

std::vector<BenchmarkResult> run_all_benchmarks(const Scenario& sc, Scheme scheme,
                                                const OptimizerOptions& opt) {
  std::vector<BenchmarkResult> out;
  BenchmarkResult equal = run_benchmark(spec_of(BenchmarkKind::kEqualUlPowers), sc, scheme, opt);
  const bool warm = equal.status != OptStatus::kInfeasible;
  out.push_back(run_benchmark(spec_of(BenchmarkKind::kProposed), sc, scheme, opt,
                              warm ? &equal.allocation : nullptr));
  out.push_back(std::move(equal));
  out.push_back(run_benchmark(spec_of(BenchmarkKind::kRfFullOpt), sc, scheme, opt));
  out.push_back(run_benchmark(spec_of(BenchmarkKind::kRfEqualUl), sc, scheme, opt));
  return out;
}

}  // namespace raq
