#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fmcw/config_file.hpp"
#include "fmcw/io.hpp"
#include "fmcw/synth.hpp"
#include "fmcw/types.hpp"

using namespace fmcw;

namespace {

RadarConfig small_config() {
  RadarConfig cfg;
  cfg.N = 32;
  cfg.P = 2;
  cfg.Q = 2;
  cfg.c = 3e8;
  return cfg;
}

RadarConfig paper_config() {
  RadarConfig cfg;
  cfg.c = 3e8;
  return cfg;
}

}  // namespace

TEST_CASE("synthesize_target matches the model formula entry by entry") {
  const RadarConfig cfg = small_config();
  Target t;
  t.a = 0.8;
  t.phi = 1.1;
  t.r = 4.2;
  t.theta = 0.3;
  const MeasurementMatrix z = synthesize_target(cfg, t);
  REQUIRE(z.N() == cfg.N);
  REQUIRE(z.M() == cfg.M());
  const double u = t.u(cfg);
  const double psi = t.psi(cfg);
  for (int n = 0; n < cfg.N; ++n) {
    for (int m = 0; m < cfg.M(); ++m) {
      const double phase = psi + 2.0 * M_PI * (u / cfg.lambda()) * m +
                           2.0 * M_PI * (2.0 * t.r + m * u) * cfg.beta() * n;
      const cd want = t.a * std::polar(1.0, phase);
      CHECK(std::abs(z.data(n, m) - want) < 1e-12);
    }
  }
}

TEST_CASE("psi lumps the reflectivity phase, chirp correction and carrier delay") {
  const RadarConfig cfg = paper_config();
  Target t;
  t.phi = 0.4;
  t.r = 5.0;
  const double tau0 = 2.0 * t.r / cfg.c;
  const double want = t.phi - M_PI * cfg.chirp_rate() * tau0 * tau0 +
                      4.0 * M_PI * cfg.f_c * t.r / cfg.c;
  CHECK(t.psi(cfg) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("every sample of a single target has magnitude a") {
  const RadarConfig cfg = small_config();
  Target t;
  t.a = 1.7;
  t.r = 3.0;
  t.theta = -0.2;
  const MeasurementMatrix z = synthesize_target(cfg, t);
  CHECK(z.data.cwiseAbs().maxCoeff() == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(z.data.cwiseAbs().minCoeff() == doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("noiseless multi-target synthesis is the sum of single syntheses") {
  const RadarConfig cfg = small_config();
  Target t1, t2;
  t1.r = 3.0;
  t1.theta = 0.25;
  t2.a = 0.5;
  t2.phi = 2.0;
  t2.r = 4.5;
  t2.theta = -0.4;
  const MeasurementMatrix sum = synthesize_noiseless(cfg, {t1, t2});
  const MeasurementMatrix a = synthesize_target(cfg, t1);
  const MeasurementMatrix b = synthesize_target(cfg, t2);
  CHECK((sum.data - a.data - b.data).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("targets beyond the unambiguous range are rejected") {
  const RadarConfig cfg = paper_config();
  Target t;
  t.r = cfg.unambiguous_range() + 0.1;
  CHECK_THROWS_AS(synthesize_target(cfg, t), std::runtime_error);
}

TEST_CASE("noise power averages to sigma^2 and the stream is seed-reproducible") {
  const RadarConfig cfg = paper_config();
  Target t;
  t.r = 5.0;
  t.theta = 0.26;
  const double sigma = 0.5;
  const MeasurementMatrix clean = synthesize_noiseless(cfg, {t});
  const MeasurementMatrix z1 = synthesize_measurement(cfg, {t}, sigma, 42);
  const MeasurementMatrix z2 = synthesize_measurement(cfg, {t}, sigma, 42);
  const MeasurementMatrix z3 = synthesize_measurement(cfg, {t}, sigma, 43);
  CHECK((z1.data - z2.data).cwiseAbs().maxCoeff() == 0.0);
  CHECK((z1.data - z3.data).cwiseAbs().maxCoeff() > 0.0);
  const double mean_power = (z1.data - clean.data).cwiseAbs2().mean();
  CHECK(mean_power == doctest::Approx(sigma * sigma).epsilon(0.08));
}

TEST_CASE("snr convention is P a^2 / sigma^2") {
  const RadarConfig cfg = paper_config();
  const double sigma = sigma_for_snr(cfg, 2.0, 20.0);
  // SNR = 100 = 4 * 4 / sigma^2.
  CHECK(sigma == doctest::Approx(std::sqrt(cfg.P * 4.0 / 100.0)).epsilon(1e-12));
  CHECK(snr_db_for_sigma(cfg, 2.0, sigma) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("config validation rejects broken invariants") {
  RadarConfig cfg = paper_config();
  cfg.N = 0;
  CHECK_THROWS(cfg.validate());
  cfg = paper_config();
  cfg.B = -1.0;
  CHECK_THROWS(cfg.validate());
  cfg = paper_config();
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("measurement export and import round trip bit-exactly") {
  const RadarConfig cfg = small_config();
  Target t;
  t.r = 2.5;
  t.theta = 0.1;
  const MeasurementMatrix z = synthesize_measurement(cfg, {t}, 0.3, 7);
  const std::string base = "io_round_trip_tmp";
  export_measurement(z, base);
  const MeasurementMatrix back = import_measurement(base);
  CHECK(back.N() == z.N());
  CHECK(back.M() == z.M());
  CHECK((back.data - z.data).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.sigma == z.sigma);
  REQUIRE(back.seed.has_value());
  CHECK(*back.seed == 7);
  CHECK(back.config.f_c == cfg.f_c);
  CHECK(back.config.N == cfg.N);
  std::remove((base + ".hdr").c_str());
  std::remove((base + ".bin").c_str());
}

TEST_CASE("key-value files are strict about unknown keys") {
  KeyValueFile kv = KeyValueFile::parse_text("radar.N = 64\nbogus_key = 1\n");
  CHECK(kv.get_int("radar.N") == 64);
  CHECK_THROWS_AS(kv.finish(), std::runtime_error);
}

TEST_CASE("repeated keys come back in file order and overrides replace them") {
  KeyValueFile kv = KeyValueFile::parse_text("p = 1\np = 2\np = 3\nq = 0\n");
  const std::vector<std::string> all = kv.get_all("p");
  REQUIRE(all.size() == 3);
  CHECK(all[0] == "1");
  CHECK(all[2] == "3");
  kv.override_value("q", "9");
  CHECK(kv.get_int("q") == 9);
  CHECK_NOTHROW(kv.finish());
}

TEST_CASE("radar config and target lists load from key-value text") {
  KeyValueFile kv = KeyValueFile::parse_text(
      "radar.f_c = 77e9\nradar.B = 4e9\nradar.sweep_time = 1e-4\nradar.N = 256\n"
      "radar.P = 4\nradar.Q = 4\nradar.c = 3e8\n"
      "target_count = 2\n"
      "target1.a = 1\ntarget1.phi = 0\ntarget1.r = 5\ntarget1.theta_deg = 15\n"
      "target2.a = 0.5\ntarget2.phi = 1.5707963\ntarget2.r = 5\ntarget2.theta_deg = -15\n");
  const RadarConfig cfg = load_radar_config(kv, "radar.");
  CHECK(cfg.N == 256);
  CHECK(cfg.c == 3e8);
  const std::vector<Target> targets = load_targets(kv);
  REQUIRE(targets.size() == 2);
  CHECK(targets[0].theta == doctest::Approx(15.0 * M_PI / 180.0));
  CHECK(targets[1].a == 0.5);
  CHECK_NOTHROW(kv.finish());
}
