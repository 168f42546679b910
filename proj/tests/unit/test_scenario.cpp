#include <doctest.h>

#include <cmath>
#include <sstream>

#include "raqswipt/config.hpp"
#include "raqswipt/errors.hpp"
#include "raqswipt/scenario.hpp"
#include "raqswipt/units.hpp"

using namespace raq;

TEST_CASE("path loss at reference points") {
  CHECK(path_loss_db(1.0, 1.0) == doctest::Approx(-32.4).epsilon(1e-12));
  CHECK(path_loss_db(100.0, 1.0) == doctest::Approx(-72.4).epsilon(1e-12));
  // Second evaluation path: one log of the product d * fc.
  const double via_product = -32.4 - 20.0 * std::log10(150.0 * 3.0);
  CHECK(path_loss_db(150.0, 3.0) == doctest::Approx(via_product).epsilon(1e-12));
  CHECK(path_loss_db(150.0, 3.0) == doctest::Approx(-85.464).epsilon(1e-5));
  CHECK_THROWS_AS(path_loss_db(0.0, 3.0), DomainError);
  CHECK_THROWS_AS(path_loss_db(10.0, -1.0), DomainError);
}

TEST_CASE("degenerate disk puts every device at the center") {
  Rng rng = make_stream(3, 0);
  const Geometry g = sample_geometry(rng, 8, GeometryConfig{0.0, 120.0});
  for (double d : g.distances()) CHECK(d == doctest::Approx(120.0).epsilon(1e-12));
}

TEST_CASE("uniform disk mean radius is 2R/3") {
  Rng rng = make_stream(5, 0);
  const GeometryConfig cfg{50.0, 150.0};
  const Geometry g = sample_geometry(rng, 10000, cfg);
  double sum = 0.0, sum2 = 0.0;
  for (const auto& p : g.devices) {
    const double r = std::hypot(p.x, p.y);
    sum += r;
    sum2 += r * r;
  }
  const double n = static_cast<double>(g.devices.size());
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 100.0 / 3.0) < 4.0 * se);
}

TEST_CASE("geometry replays from a seed") {
  Rng a = make_stream(9, 2), b = make_stream(9, 2);
  const auto ga = sample_geometry(a, 10, {});
  const auto gb = sample_geometry(b, 10, {});
  for (std::size_t k = 0; k < ga.devices.size(); ++k) {
    CHECK(ga.devices[k].x == gb.devices[k].x);
    CHECK(ga.devices[k].y == gb.devices[k].y);
  }
}

TEST_CASE("pilot power gain") {
  const FrontEnd rf = default_rf_frontend();
  CHECK(pilot_power_gain_db(rf, rf) == doctest::Approx(0.0));
  FrontEnd x = rf;
  x.rho = rf.rho * 100.0;
  CHECK(pilot_power_gain_db(x, rf) == doctest::Approx(20.0).epsilon(1e-12));
  x.rho = rf.rho * std::pow(10.0, 2.6);
  CHECK(pilot_power_gain_db(x, rf) == doctest::Approx(26.0).epsilon(1e-12));
  CHECK(pilot_power_gain_db(default_raqr_frontend(), rf) == doctest::Approx(kDefaultRaqrGainDb).epsilon(1e-12));
}

TEST_CASE("front-end and system validation") {
  FrontEnd fe = default_rf_frontend();
  fe.phi2 = 0.5;
  CHECK_THROWS_AS(fe.validate(), ConfigError);
  fe = default_raqr_frontend();
  fe.sigma2 = 0.0;
  CHECK_THROWS_AS(fe.validate(), ConfigError);

  SystemConfig s = default_system();
  s.broadcast_per_device();
  CHECK_NOTHROW(s.validate());
  s.rreq_u.push_back(0.1);
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("dB helpers") {
  CHECK(db_to_linear(30.0) == doctest::Approx(1000.0));
  CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0));
  CHECK(watt_to_dbm(1e-3) == doctest::Approx(0.0));
  CHECK_THROWS_AS(linear_to_db(0.0), DomainError);
}

TEST_CASE("config round trip") {
  ConfigFile c;
  c.system.M = 64;
  c.system.K = 4;
  c.system.tau = 4;
  c.system.rreq_u = {0.1, 0.2, 0.3, 0.4};
  c.system.broadcast_per_device();
  c.geometry.bs_distance = 210.5;
  c.raqr.rho = 123456.789;
  std::istringstream in(write_config(c));
  const ConfigFile back = read_config(KeyValueDocument::parse(in));
  CHECK(write_config(back) == write_config(c));
  CHECK(back.system.rreq_u[2] == 0.3);
}

TEST_CASE("config errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_config(KeyValueDocument::parse(in));
  };
  CHECK_THROWS_AS(parse("[system]\nM = 10\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\nM = ten\n"), ConfigError);
  CHECK_THROWS_AS(parse("M = 10\n"), ConfigError);
  CHECK_THROWS_AS(parse("[system]\nM = 10\nM = 11\n"), ConfigError);
  CHECK_THROWS_AS(parse("[geometry]\nregion_radius = 200\nbs_distance = 100\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/default.ini"), ConfigError);
  CHECK(parse("# comment\n[system]\nK = 3 ; trailing\n").system.rreq_u.size() == 3);
}
