#include <doctest.h>

#include <cmath>
#include <sstream>

#include "raqswipt/channel.hpp"
#include "raqswipt/config.hpp"
#include "raqswipt/harness.hpp"
#include "raqswipt/monte_carlo.hpp"
#include "raqswipt/optimizer.hpp"

using namespace raq;

namespace {

Scenario defaults(int drop) {
  ConfigFile c;
  c.system.broadcast_per_device();
  return make_scenario(c, draw_geometry(c, 1, drop), ReceiverKind::kRaqr);
}

}  // namespace

TEST_CASE("Monte-Carlo results do not depend on the thread count") {
  const Scenario sc = defaults(0);
  const Allocation a = initial_allocation(sc, Scheme::kZf, {});
  McOptions one{400, 5, 8, 1};
  McOptions many{400, 5, 8, 4};
  const auto r1 = mc_link(Scheme::kZf, sc, a, one);
  const auto r4 = mc_link(Scheme::kZf, sc, a, many);
  for (int k = 0; k < sc.K(); ++k) {
    CHECK(r1.uplink.rate[k] == r4.uplink.rate[k]);
    CHECK(r1.downlink.energy[k] == r4.downlink.energy[k]);
    CHECK(r1.uplink.ergodic_rate[k] == r4.uplink.ergodic_rate[k]);
  }
  CHECK(r1.uplink.small_ensemble);
}

TEST_CASE("MRC/MRT Monte-Carlo agrees with the closed forms") {
  const Scenario sc = defaults(1);
  const Allocation a = initial_allocation(sc, Scheme::kMrcMrt, {});
  const auto ev = evaluate(sc, a, Scheme::kMrcMrt);
  McOptions opt{4000, 3, 20, 0};
  const auto mc = mc_link(Scheme::kMrcMrt, sc, a, opt);
  CHECK_FALSE(mc.uplink.small_ensemble);
  for (int k = 0; k < sc.K(); ++k) {
    CHECK(std::abs(mc.uplink.rate[k] - ev.rate_u[k]) <= 5.0 * mc.uplink.rate_se[k]);
    CHECK(std::abs(mc.downlink.energy[k] - ev.energy[k]) <= 5.0 * mc.downlink.energy_se[k]);
    CHECK(mc.uplink.ergodic_rate[k] >= ev.rate_u[k] * 0.99);
  }
}

TEST_CASE("channel estimation Monte-Carlo") {
  const Scenario sc = defaults(2);
  const std::vector<double> p(sc.K(), 1e-5);
  const auto r = mc_channel_estimation(sc, p, McOptions{2000, 9, 10, 0});
  for (int k = 0; k < sc.K(); ++k) {
    const double e = error_variance(sc.beta[k], p[k], sc.system.tau, sc.receiver);
    CHECK(std::abs(r.mse[k] - e) <= 4.0 * r.mse_se[k]);
    // MMSE orthogonality: the estimate is uncorrelated with its error.
    CHECK(r.correlation[k] < 0.05);
    CHECK(r.estimate_var[k] == doctest::Approx(sc.beta[k] - e).epsilon(0.05));
  }
}

TEST_CASE("rate report carries bounds and estimates") {
  const Scenario sc = defaults(0);
  const Allocation a = initial_allocation(sc, Scheme::kMrcMrt, {});
  const RateReport rr = make_rate_report("drop0", Scheme::kMrcMrt, sc, a, McOptions{200, 1, 4, 1});
  CHECK(rr.rate_u_lb.size() == 10);
  CHECK(rr.rate_u_mc.size() == 10);
  std::ostringstream os;
  write_rate_report_header(os);
  write_rate_report_rows(os, rr);
  int lines = 0;
  for (char ch : os.str()) lines += ch == '\n';
  CHECK(lines == 11);
}
