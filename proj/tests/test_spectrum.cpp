#include <doctest.h>

#include "isrsgn/config.hpp"
#include "isrsgn/errors.hpp"
#include "isrsgn/spectrum.hpp"
#include "test_util.hpp"

using namespace isrsgn;

TEST_CASE("dispersion conversion matches hand-computed values") {
  // beta2 = -D lambda^2 / (2 pi c): D = 17 ps/nm/km at 1550 nm
  //   17e-6 * (1.55e-6)^2 / (2 pi * 299792458) = 2.16827e-26 s^2/m
  auto [b2, b3] = convert_dispersion_eng(17.0, 0.0, 1550.0);
  CHECK(b2 == doctest::Approx(-2.16827e-26).epsilon(1e-4));
  CHECK(b3 == doctest::Approx(0.0).epsilon(1e-12));

  auto [z2, z3] = convert_dispersion_eng(0.0, 0.0, 1550.0);
  CHECK(z2 == 0.0);
  CHECK(z3 == 0.0);

  // beta3 = (lambda^2/(2 pi c))^2 (S + 2 D / lambda), S = 0.092 ps/nm^2/km:
  //   (1.275448e-21)^2 * (92 + 21.93548) = 1.85348e-40 s^3/m
  auto [w2, w3] = convert_dispersion_eng(17.0, 0.092, 1550.0);
  CHECK(w3 > 0.0);
  CHECK(w3 == doctest::Approx(1.85348e-40).epsilon(1e-4));
  CHECK(w2 == doctest::Approx(b2).epsilon(1e-12));
}

TEST_CASE("dispersion conversion is linear in D and S") {
  auto [a2, a3] = convert_dispersion_eng(5.0, 0.03, 1550.0);
  auto [b2, b3] = convert_dispersion_eng(12.0, 0.062, 1550.0);
  auto [s2, s3] = convert_dispersion_eng(17.0, 0.092, 1550.0);
  CHECK(a2 + b2 == doctest::Approx(s2).epsilon(1e-12));
  CHECK(a3 + b3 == doctest::Approx(s3).epsilon(1e-12));
}

TEST_CASE("flat spectrum: single-channel identity") {
  const auto s = build_flat_spectrum(1.0, 1e12, 1, 1e12);
  CHECK(s.psd(0.0) == doctest::Approx(1e-12).epsilon(1e-12));
  CHECK(s.psd(0.49e12) == doctest::Approx(1e-12).epsilon(1e-12));
  CHECK(s.psd(0.51e12) == 0.0);
  CHECK(s.psd(-0.51e12) == 0.0);
  CHECK(s.total_power() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("flat spectrum: validation-grid and wideband-grid totals") {
  const auto a = testutil::table1a_spectrum(0.1);
  CHECK(a.channels.size() == 101);
  CHECK(a.total_bandwidth() == doctest::Approx(1.010101e12).epsilon(1e-6));
  const auto b = testutil::table1b_spectrum(0.25);
  CHECK(b.channels.size() == 201);
  CHECK(b.total_bandwidth() == doctest::Approx(10.050201e12).epsilon(1e-6));
}

TEST_CASE("PSD integral equals the channel-power sum") {
  auto s = build_flat_spectrum(0.2, 1e12, 21, 40e9);
  s.channels[3].power_w *= 2.5;  // non-uniform powers keep the identity
  double integral = 0.0;
  for (const auto& ch : s.channels) integral += s.psd(ch.center_hz) * ch.bandwidth_hz;
  double sum = 0.0;
  for (const auto& ch : s.channels) sum += ch.power_w;
  CHECK(integral == doctest::Approx(sum).epsilon(1e-12));
  CHECK(s.total_power() == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("flat spectrum round-trips through the config format") {
  SystemConfig cfg;
  cfg.channel_count = 101;
  cfg.symbol_rate_gbd = 10.0;
  cfg.spacing_ghz = 10.001;
  cfg.launch_power_dbm_total = 10.0;
  const auto a = cfg.spectrum();
  const auto cfg2 = parse_config_text(cfg.serialize());
  const auto b = cfg2.spectrum();
  REQUIRE(a.channels.size() == b.channels.size());
  for (std::size_t i = 0; i < a.channels.size(); ++i) {
    CHECK(a.channels[i].center_hz == doctest::Approx(b.channels[i].center_hz).epsilon(1e-12));
    CHECK(a.channels[i].power_w == doctest::Approx(b.channels[i].power_w).epsilon(1e-12));
    CHECK(a.channels[i].bandwidth_hz ==
          doctest::Approx(b.channels[i].bandwidth_hz).epsilon(1e-12));
  }
}

TEST_CASE("spectrum and builder input validation") {
  CHECK_THROWS_AS(build_flat_spectrum(-1.0, 1e12, 1, 1e12), config_error);
  CHECK_THROWS_AS(build_flat_spectrum(1.0, -1e12, 1, 1e12), config_error);
  CHECK_THROWS_AS(build_flat_spectrum(1.0, 1e12, 3, 0.5e12), config_error);  // does not fit

  WdmSpectrum s = build_flat_spectrum(1.0, 1e12, 4, 0.25e12);
  s.channels[1].power_w = -0.1;
  CHECK_THROWS_AS(s.validate(), config_error);
  s = build_flat_spectrum(1.0, 1e12, 4, 0.25e12);
  s.channels[2].bandwidth_hz = 0.5e12;  // overlaps its neighbours
  CHECK_THROWS_AS(s.validate(), config_error);
}

TEST_CASE("psd breakpoints mark band ends, gaps and power steps") {
  auto s = build_flat_spectrum(1.0, 1e12, 4, 0.25e12);  // gapless uniform
  auto pts = s.psd_breakpoints();
  CHECK(pts.size() == 2);  // only the band ends
  s.channels[2].power_w *= 2.0;
  pts = s.psd_breakpoints();
  CHECK(pts.size() == 4);  // plus both edges of the stepped channel
  auto g = build_flat_spectrum(1.0, 1e12, 4, 0.2e12);  // gaps between channels
  pts = g.psd_breakpoints();
  CHECK(pts.size() == 8);
}

TEST_CASE("fiber validation") {
  FiberSpec f = testutil::table1_fiber(false);
  CHECK_NOTHROW(f.validate());
  f.alpha_per_m = 0.0;
  CHECK_THROWS_AS(f.validate(), config_error);
  f = testutil::table1_fiber(false);
  f.length_m = 0.0;
  CHECK_THROWS_AS(f.validate(), config_error);
  f = testutil::table1_fiber(false);
  SampledCurve bad;
  bad.x = {0.0, 14e12};
  bad.y = {0.1e-3, 0.4e-3};  // g(0) != 0
  f.raman_gain_curve = bad;
  CHECK_THROWS_AS(f.validate(), config_error);
}
