#include <doctest.h>

#include <cmath>

#include "isrsgn/errors.hpp"
#include "isrsgn/raman.hpp"
#include "isrsgn/units.hpp"
#include "test_util.hpp"

using namespace isrsgn;
using testutil::db;

namespace {
const double kAlpha02 = 0.2 * std::log(10.0) / 10.0 / 1e3;  // 0.2 dB/km in 1/m
}

TEST_CASE("effective length") {
  CHECK(effective_length(kAlpha02, 100e3) == doctest::Approx(21497.5).epsilon(1e-4));
  CHECK(effective_length(kAlpha02, 0.0) == 0.0);
  CHECK(effective_length(kAlpha02, 1e9) == doctest::Approx(1.0 / kAlpha02).epsilon(1e-9));
  CHECK(effective_length(kAlpha02, 50e3) < effective_length(kAlpha02, 100e3));
  CHECK_THROWS_AS(effective_length(0.0, 1e3), config_error);
}

TEST_CASE("edge power transfer: frozen hand arithmetic") {
  // PSD 40 fW/Hz over B, C_r = 0.008 1/W/km/THz, L_eff = 26 km.
  const double cr = 0.008 / 1e3 / 1e12;
  const double leff = 26e3;
  const double b1 = 5.3e12, b2 = 10.6e12;
  const double p1 = 40e-15 * b1, p2 = 40e-15 * b2;
  CHECK(p1 == doctest::Approx(0.212).epsilon(1e-12));
  // (10/ln10) * 0.212 * 0.008 * 26 * 5.3 = 1.01503 dB
  CHECK(edge_power_transfer_db(p1, cr, leff, b1) == doctest::Approx(1.01503).epsilon(1e-4));
  // (10/ln10) * 0.424 * 0.008 * 26 * 10.6 = 4.05997 dB
  CHECK(edge_power_transfer_db(p2, cr, leff, b2) == doctest::Approx(4.05997).epsilon(1e-4));
  CHECK(edge_power_transfer_db(p1, 0.0, leff, b1) == 0.0);
}

TEST_CASE("profile scaling invariance under (P/k, k*C_r)") {
  const double k = 10.0;
  auto fiber = testutil::table1_fiber(true);
  auto spec = testutil::table1b_spectrum(units::dbm_to_watt(24.0));
  auto fiber2 = fiber;
  fiber2.raman_slope_per_w_m_hz *= k;
  auto spec2 = spec;
  for (auto& ch : spec2.channels) ch.power_w /= k;

  const double leff = effective_length(fiber.alpha_per_m, fiber.length_m);
  const double b = spec.total_bandwidth();
  CHECK(edge_power_transfer_db(spec.total_power(), fiber.raman_slope_per_w_m_hz, leff, b) ==
        doctest::Approx(edge_power_transfer_db(spec2.total_power(),
                                               fiber2.raman_slope_per_w_m_hz, leff, b))
            .epsilon(1e-12));
  for (double f : {-5e12, -1e12, 0.0, 2.5e12, 5e12}) {
    const double r1 = analytical_profile(spec, fiber, 100e3, f);
    const double r2 = analytical_profile(spec2, fiber2, 100e3, f);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
  }
}

TEST_CASE("closed-form profile: degenerate and normalized cases") {
  auto fiber = testutil::table1_fiber(true);
  auto spec = testutil::table1b_spectrum(units::dbm_to_watt(24.0));

  SUBCASE("C_r = 0 degenerates to the plain exponential") {
    auto f0 = fiber;
    f0.raman_slope_per_w_m_hz = 0.0;
    for (double f : {-5e12, 0.0, 5e12})
      CHECK(analytical_profile(spec, f0, 80e3, f) ==
            doctest::Approx(std::exp(-fiber.alpha_per_m * 80e3)).epsilon(1e-12));
  }

  SUBCASE("launch normalization rho(0, f) = 1") {
    for (double f : {-5e12, -2e12, 1e12, 5e12})
      CHECK(analytical_profile(spec, fiber, 0.0, f) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("flat-spectrum center value x/sinh(x) against numerical quadrature") {
    const auto prof = make_analytical_profile(spec, fiber);
    const double z = 100e3;
    const double x = prof.tilt_x(z);
    const double b = spec.total_bandwidth();
    const double xb2 = 0.5 * x * b;
    const double expected = std::exp(-fiber.alpha_per_m * z) * xb2 / std::sinh(xb2);
    CHECK(prof.rho(z, 0.0) == doctest::Approx(expected).epsilon(1e-9));
    // Independent check of the normalization integral.
    const double denom = testutil::brute_integral(
        [&](double nu) { return spec.psd(nu) * std::exp(-x * nu); }, spec.band_lo(),
        spec.band_hi(), 200001);
    CHECK(prof.psd_exp_moment(x) == doctest::Approx(denom).epsilon(1e-8));
  }

  SUBCASE("total power conservation for an asymmetric spectrum") {
    auto s = build_flat_spectrum(0.3, 2e12, 8, 0.25e12);
    for (std::size_t i = 0; i < s.channels.size(); ++i)
      s.channels[i].power_w *= (1.0 + 0.2 * static_cast<double>(i));
    auto f = fiber;
    f.raman_slope_per_w_m_hz = 10 * fiber.raman_slope_per_w_m_hz;
    const auto prof = make_analytical_profile(s, f);
    for (double z : {10e3, 50e3, 100e3}) {
      const double lhs = testutil::brute_integral(
          [&](double nu) { return s.psd(nu) * prof.rho(z, nu); }, s.band_lo(), s.band_hi(),
          200001);
      CHECK(lhs == doctest::Approx(s.total_power() * std::exp(-f.alpha_per_m * z)).epsilon(1e-8));
    }
  }

  SUBCASE("strictly decreasing in frequency") {
    const auto prof = make_analytical_profile(spec, fiber);
    double prev = prof.rho(100e3, -5e12);
    for (double f = -4e12; f <= 5e12; f += 1e12) {
      const double cur = prof.rho(100e3, f);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("closed-form profile matches the published wideband edge gains at 24 dBm") {
  auto fiber = testutil::table1_fiber(true);
  auto spec = testutil::table1b_spectrum(units::dbm_to_watt(24.0));
  const auto prof = make_analytical_profile(spec, fiber);
  const double lo = spec.channels.front().center_hz;
  const double hi = spec.channels.back().center_hz;
  CHECK(isrs_net_gain_db(prof, 100e3, lo) == doctest::Approx(2.9).epsilon(0.04));
  CHECK(isrs_net_gain_db(prof, 100e3, hi) == doctest::Approx(-3.7).epsilon(0.04));
  // Edge-to-edge spread ~ 6.6 dB.
  CHECK(isrs_net_gain_db(prof, 100e3, lo) - isrs_net_gain_db(prof, 100e3, hi) ==
        doctest::Approx(6.6).epsilon(0.02));
}

TEST_CASE("net gain is zero without Raman coupling") {
  auto fiber = testutil::table1_fiber(true);
  fiber.raman_slope_per_w_m_hz = 0.0;
  auto spec = testutil::table1b_spectrum(0.1);
  const auto prof = make_analytical_profile(spec, fiber);
  for (double z : {0.0, 30e3, 100e3})
    CHECK(isrs_net_gain_db(prof, z, 1e12) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("bandwidth beyond the linear-gain window is rejected") {
  auto fiber = testutil::table1_fiber(true);
  auto spec = build_flat_spectrum(0.1, 16e12, 160, 0.1e12);
  CHECK_THROWS_AS(make_analytical_profile(spec, fiber), model_domain_error);
}

TEST_CASE("coupled-power solver: no coupling gives the plain exponential") {
  auto fiber = testutil::table1_fiber(true);
  fiber.raman_slope_per_w_m_hz = 0.0;
  auto spec = build_flat_spectrum(0.05, 0.5e12, 5, 0.1e12);
  std::vector<double> zg;
  for (int i = 0; i <= 10; ++i) zg.push_back(fiber.length_m * i / 10);
  const auto prof = solve_raman_ode(spec, fiber, zg);
  for (double z : {20e3, 60e3, 100e3})
    for (double f : {-0.2e12, 0.0, 0.2e12})
      CHECK(prof.rho(z, f) == doctest::Approx(std::exp(-fiber.alpha_per_m * z)).epsilon(1e-9));
}

TEST_CASE("coupled-power solver: two-channel first-order symmetry") {
  auto fiber = testutil::table1_fiber(true);
  fiber.raman_slope_per_w_m_hz = 0.028 / 1e3 / 1e12;
  auto spec = build_flat_spectrum(2e-3, 0.2e12, 2, 0.05e12);
  std::vector<double> zg{0.0, 50e3, 100e3};
  const auto prof = solve_raman_ode(spec, fiber, zg);
  const double a = fiber.alpha_per_m;
  const double g_low = std::log(prof.rho(100e3, spec.channels[0].center_hz)) + a * 100e3;
  const double g_high = std::log(prof.rho(100e3, spec.channels[1].center_hz)) + a * 100e3;
  CHECK(g_low > 0.0);
  CHECK(g_high < 0.0);
  // First-order antisymmetry; the photon-count weight breaks it only at
  // second order (relative f_j/f_i - 1 ~ 1e-3 here).
  CHECK(g_low == doctest::Approx(-g_high).epsilon(5e-3));

  // Brute-force fine-step midpoint integration of the same two-channel system.
  const double coupling = fiber.raman_coupling(spec.channels[1].center_hz -
                                               spec.channels[0].center_hz);
  const double f_lo_abs = spec.absolute_frequency(spec.channels[0].center_hz);
  const double f_hi_abs = spec.absolute_frequency(spec.channels[1].center_hz);
  auto rhs = [&](double lo_w, double hi_w, double& dlo, double& dhi) {
    dlo = -a * lo_w + coupling * hi_w * lo_w;
    dhi = -a * hi_w - (f_lo_abs / f_hi_abs) * coupling * lo_w * hi_w;
  };
  double p_lo = spec.channels[0].power_w, p_hi = spec.channels[1].power_w;
  const int steps = 200000;
  const double h = 100e3 / steps;
  for (int s = 0; s < steps; ++s) {
    double d1lo, d1hi, d2lo, d2hi;
    rhs(p_lo, p_hi, d1lo, d1hi);
    rhs(p_lo + 0.5 * h * d1lo, p_hi + 0.5 * h * d1hi, d2lo, d2hi);
    p_lo += h * d2lo;
    p_hi += h * d2hi;
  }
  CHECK(prof.rho(100e3, spec.channels[0].center_hz) ==
        doctest::Approx(p_lo / spec.channels[0].power_w).epsilon(1e-7));
  CHECK(prof.rho(100e3, spec.channels[1].center_hz) ==
        doctest::Approx(p_hi / spec.channels[1].power_w).epsilon(1e-7));
}

TEST_CASE("coupled-power solver converges to the closed form at low power") {
  auto fiber = testutil::table1_fiber(true);
  // P_tot C_r L_eff B <= 0.05
  const double leff = effective_length(fiber.alpha_per_m, fiber.length_m);
  const double b = 2e12;
  const double p_tot = 0.05 / (fiber.raman_slope_per_w_m_hz * leff * b);
  auto spec = build_flat_spectrum(p_tot, b, 21, b / 21);
  std::vector<double> zg;
  for (int i = 0; i <= 20; ++i) zg.push_back(fiber.length_m * i / 20);
  const auto ode = solve_raman_ode(spec, fiber, zg);
  const auto closed = make_analytical_profile(spec, fiber);
  double worst = 0.0;
  for (const auto& ch : spec.channels) {
    const double dev = std::abs(db(ode.rho(100e3, ch.center_hz)) -
                                db(closed.rho(100e3, ch.center_hz)));
    worst = std::max(worst, dev);
  }
  CHECK(worst <= 0.02);
}

TEST_CASE("coupled-power solver tracks the closed form at the 24 dBm operating point") {
  auto fiber = testutil::table1_fiber(true);
  auto spec = testutil::table1b_spectrum(units::dbm_to_watt(24.0));
  std::vector<double> zg;
  for (int i = 0; i <= 50; ++i) zg.push_back(fiber.length_m * i / 50);
  const auto ode = solve_raman_ode(spec, fiber, zg);
  const auto closed = make_analytical_profile(spec, fiber);
  const double lo = spec.channels.front().center_hz;
  const double hi = spec.channels.back().center_hz;
  CHECK(std::abs(db(ode.rho(100e3, lo)) - db(closed.rho(100e3, lo))) <= 0.3);
  CHECK(std::abs(db(ode.rho(100e3, hi)) - db(closed.rho(100e3, hi))) <= 0.3);
}

TEST_CASE("coupled-power solver input validation") {
  auto fiber = testutil::table1_fiber(true);
  auto spec = build_flat_spectrum(0.01, 0.2e12, 2, 0.1e12);
  CHECK_THROWS_AS(solve_raman_ode(spec, fiber, {0.0}), config_error);
  CHECK_THROWS_AS(solve_raman_ode(spec, fiber, {0.0, 50e3}), config_error);  // not at L
  CHECK_THROWS_AS(solve_raman_ode(spec, fiber, {10e3, 100e3}), config_error);
}

TEST_CASE("sampled profile interpolation clamps outside the channel grid") {
  auto fiber = testutil::table1_fiber(true);
  auto spec = build_flat_spectrum(0.05, 0.5e12, 5, 0.1e12);
  std::vector<double> zg{0.0, 25e3, 50e3, 75e3, 100e3};
  const auto prof = solve_raman_ode(spec, fiber, zg);
  CHECK(prof.rho(50e3, -1e13) == doctest::Approx(prof.rho(50e3, spec.channels.front().center_hz)));
  CHECK(prof.rho(50e3, +1e13) == doctest::Approx(prof.rho(50e3, spec.channels.back().center_hz)));
}
