// Acceptance suite: one criterion per invocation (argument 1..9 or
// "paperscale"). Prints one [PASS]/[FAIL] line per criterion plus the
// measured numbers; exits non-zero on failure, 77 when a gated criterion is
// skipped.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "isrsgn/comb.hpp"
#include "isrsgn/gn_engine.hpp"
#include "isrsgn/math_util.hpp"
#include "isrsgn/metrics.hpp"
#include "isrsgn/raman.hpp"
#include "isrsgn/span_kernel.hpp"
#include "isrsgn/ssfm.hpp"
#include "isrsgn/units.hpp"

using namespace isrsgn;

namespace {

double db(double x) { return 10.0 * std::log10(x); }

struct Reporter {
  std::string title;
  bool ok = true;
  std::string details;

  void check(bool pass, const std::string& what) {
    ok = ok && pass;
    details += std::string("\n    ") + (pass ? "ok  " : "FAIL") + "  " + what;
  }
  int finish(std::chrono::steady_clock::time_point t0) const {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << title << "  (" << secs << " s)" << details
              << "\n";
    return ok ? 0 : 1;
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

FiberSpec fiber_table1(bool wideband) {
  FiberSpec f;
  f.alpha_per_m = units::atten_db_per_km_to_per_m(0.2);
  auto [b2, b3] = convert_dispersion_eng(17.0, wideband ? 0.092 : 0.0, 1550.0);
  f.beta2_s2_per_m = b2;
  f.beta3_s3_per_m = b3;
  f.gamma_per_w_m = units::gamma_to_si(1.2);
  f.raman_slope_per_w_m_hz = units::raman_slope_to_si(wideband ? 0.028 : 0.28);
  f.length_m = 100e3;
  return f;
}

WdmSpectrum spectrum_1a(double p_dbm) {
  return build_flat_spectrum(units::dbm_to_watt(p_dbm), 101 * 10.001e9, 101, 10.001e9);
}
WdmSpectrum spectrum_1b(double p_dbm) {
  return build_flat_spectrum(units::dbm_to_watt(p_dbm), 201 * 50.001e9, 201, 50.001e9);
}

// --- criterion 1 -----------------------------------------------------------

int criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  Reporter r{"criterion 1: spectral-edge power-transfer law"};
  const double cr = units::raman_slope_to_si(0.008);
  const double leff = 26e3;
  const double d1 = edge_power_transfer_db(40e-15 * 5.3e12, cr, leff, 5.3e12);
  const double d2 = edge_power_transfer_db(40e-15 * 10.6e12, cr, leff, 10.6e12);
  r.check(std::abs(d1 - 1.0) <= 0.05,
          "transfer(5.3 THz) = " + num(d1) + " dB within 1.0 +- 0.05 dB");
  // The published claim at 10.6 THz is the inequality "> 4 dB"; the exact
  // 10/ln10 constant gives 4.060 dB (the rounded 4.3 constant would give
  // 4.020). Both the claim and the hand-evaluated law are enforced at the
  // stated 0.05 dB tolerance.
  r.check(d2 > 4.0 - 0.05, "transfer(10.6 THz) = " + num(d2) + " dB exceeds 4 dB");
  r.check(std::abs(d2 - 4.05997) <= 0.05,
          "transfer(10.6 THz) matches the hand-evaluated law 4.060 +- 0.05 dB");
  return r.finish(t0);
}

// --- criterion 2 -----------------------------------------------------------

int criterion_2() {
  auto t0 = std::chrono::steady_clock::now();
  Reporter r{"criterion 2: coupled-power solution vs closed form at 28 dBm"};
  const auto fiber = fiber_table1(true);
  const auto spec = spectrum_1b(28.0);
  std::vector<double> zg;
  for (int i = 0; i <= 25; ++i) zg.push_back(fiber.length_m * i / 25);
  const auto ode = solve_raman_ode(spec, fiber, zg);
  const auto closed = make_analytical_profile(spec, fiber);
  double sum = 0.0, worst = 0.0;
  for (const auto& ch : spec.channels) {
    const double dev = std::abs(isrs_net_gain_db(ode, fiber.length_m, ch.center_hz) -
                                isrs_net_gain_db(closed, fiber.length_m, ch.center_hz));
    sum += dev;
    worst = std::max(worst, dev);
  }
  const double mean = sum / static_cast<double>(spec.channels.size());
  r.check(mean <= 0.3, "mean |gain deviation| = " + num(mean) + " dB <= 0.3 dB (max " +
                           num(worst) + " dB)");
  return r.finish(t0);
}

// --- criterion 3 -----------------------------------------------------------

int criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  Reporter r{"criterion 3: eta invariance under (P/10, 10*C_r)"};
  auto fiber = fiber_table1(false);
  const int channels = 21;
  const double b = 1e12;
  const auto spec = build_flat_spectrum(50e-3, b, channels, b / channels);
  auto fiber10 = fiber;
  fiber10.raman_slope_per_w_m_hz *= 10.0;
  auto spec10 = build_flat_spectrum(5e-3, b, channels, b / channels);
  QuadratureOptions q;
  q.rel_tol = 1e-3;
  const auto a = compute_nli(spec, fiber, 1, ModelVariant::IsrsAnalytical, q);
  const auto c = compute_nli(spec10, fiber10, 1, ModelVariant::IsrsAnalytical, q);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.channels.size(); ++i)
    worst = std::max(worst,
                     std::abs(db(a.channels[i].eta_per_w2) - db(c.channels[i].eta_per_w2)));
  r.check(worst <= 1e-6, "max |delta eta| = " + num(worst) + " dB <= 1e-6 dB");
  return r.finish(t0);
}

// --- criterion 4 -----------------------------------------------------------

int criterion_4() {
  auto t0 = std::chrono::steady_clock::now();
  Reporter r{"criterion 4: distance quadrature vs closed-form link factor"};
  const auto fiber = fiber_table1(false);
  const auto spec = spectrum_1a(10.0);
  QuadratureOptions q;
  q.rel_tol = 3e-4;
  const auto closed = compute_nli(spec, fiber, 1, ModelVariant::ConventionalGn, q);
  q.force_numeric_zeta = true;
  const auto numeric = compute_nli(spec, fiber, 1, ModelVariant::ConventionalGn, q);
  double worst = 0.0;
  for (std::size_t i = 0; i < closed.channels.size(); ++i)
    worst = std::max(worst, std::abs(db(numeric.channels[i].g_nli_w_per_hz /
                                        closed.channels[i].g_nli_w_per_hz)));
  r.check(worst <= 0.01, "max |deviation| over 101 channels = " + num(worst) + " dB <= 0.01 dB");
  return r.finish(t0);
}

// --- criterion 5 -----------------------------------------------------------

int criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  Reporter r{"criterion 5: discrete-comb arbitration of the profile placement"};
  // 15 tones, 1 GHz spacing; fiber chosen so the phase-matched ridge spans
  // several tone spacings; C_r set for a 6 dB edge-to-edge transfer.
  FiberSpec fiber;
  fiber.alpha_per_m = units::atten_db_per_km_to_per_m(0.4);
  auto [b2, b3] = convert_dispersion_eng(10.0, 0.0, 1550.0);
  fiber.beta2_s2_per_m = b2;
  fiber.beta3_s3_per_m = b3;
  fiber.gamma_per_w_m = units::gamma_to_si(1.2);
  fiber.length_m = 100e3;
  const int tones = 15;
  const double f0 = 1e9;
  const double p_tot = 15e-3;
  const double leff = effective_length(fiber.alpha_per_m, fiber.length_m);
  const double target = 6.0 / (10.0 / std::log(10.0));
  fiber.raman_slope_per_w_m_hz = target / (p_tot * leff * tones * f0);

  const ToneComb comb = ToneComb::flat(p_tot, f0, tones);
  const auto spec = comb_to_spectrum(comb);
  const auto prof = make_analytical_profile(spec, fiber);
  const double spread = edge_power_transfer_db(p_tot, fiber.raman_slope_per_w_m_hz, leff,
                                               tones * f0);
  r.check(std::abs(spread - 6.0) <= 0.1, "edge transfer = " + num(spread) + " dB (target 6)");

  const auto g_comb = rp_comb_psd(comb, fiber, prof, fiber.length_m);
  QuadratureOptions q;
  q.rel_tol = 3e-4;
  const auto model = compute_nli(spec, fiber, 1, ModelVariant::IsrsAnalytical, q);
  const auto swapped = compute_nli(spec, fiber, 1, ModelVariant::BaselineSwappedRho, q);

  double worst_interior = 0.0;
  for (int idx = -5; idx <= 5; ++idx) {
    const double f = idx * f0;
    const double dev = std::abs(db(g_comb.at_index(idx) / model.at_frequency(f).g_nli_w_per_hz));
    worst_interior = std::max(worst_interior, dev);
  }
  r.check(worst_interior <= 0.1,
          "max |comb - model| at interior tones = " + num(worst_interior) + " dB <= 0.1 dB");

  double edge_margin = 1e9;
  for (int idx : {-7, 7}) {
    const double f = idx * f0;
    const double dev =
        std::abs(db(g_comb.at_index(idx) / swapped.at_frequency(f).g_nli_w_per_hz));
    edge_margin = std::min(edge_margin, dev);
  }
  r.check(edge_margin >= 0.3, "min |comb - swapped| at edge tones = " + num(edge_margin) +
                                  " dB >= 0.3 dB");
  return r.finish(t0);
}

// --- criterion 6 -----------------------------------------------------------

int criterion_6() {
  auto t0 = std::chrono::steady_clock::now();
  Reporter r{"criterion 6: desk-scale split-step validation"};
  SimConfig cfg;
  cfg.fiber = fiber_table1(false);
  const int channels = 21;
  const double spacing = 10.001e9;
  // Hold C_r * B at the validation-grid product.
  cfg.fiber.raman_slope_per_w_m_hz =
      units::raman_slope_to_si(0.28) * (101.0 * 10.001e9) / (channels * spacing);
  cfg.spectrum = build_flat_spectrum(1e-3, channels * spacing, channels, spacing);
  for (auto& ch : cfg.spectrum.channels) ch.symbol_rate_baud = 10e9;
  cfg.symbols_log2 = 13;
  cfg.step_m = 10.0;
  cfg.seed = 11;

  QuadratureOptions q;
  q.rel_tol = 3e-4;
  for (double p_dbm : {15.0, 23.5}) {
    const double p_tot = units::dbm_to_watt(p_dbm);
    auto sim_cfg = cfg;
    const double scale = p_tot / sim_cfg.spectrum.total_power();
    for (auto& ch : sim_cfg.spectrum.channels) ch.power_w *= scale;
    const auto sim = ssfm_simulate(sim_cfg);
    const auto model =
        compute_nli(sim_cfg.spectrum, sim_cfg.fiber, 1, ModelVariant::IsrsAnalytical, q);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < model.channels.size(); ++i)
      worst = std::max(worst, std::abs(db(sim.channels[i].eta_per_w2 /
                                          model.channels[i].eta_per_w2)));
    const double edge0 = std::abs(db(sim.channels.front().eta_per_w2 /
                                     model.channels.front().eta_per_w2));
    const double edge1 = std::abs(db(sim.channels.back().eta_per_w2 /
                                     model.channels.back().eta_per_w2));
    r.check(worst <= 0.2, "P = " + num(p_dbm) + " dBm: max interior |delta eta| = " +
                              num(worst) + " dB <= 0.2 dB (edges excluded: " + num(edge0) +
                              " / " + num(edge1) + " dB)");
  }
  return r.finish(t0);
}

int criterion_paperscale() {
  if (!std::getenv("ISRSGN_RUN_PAPERSCALE")) {
    std::cout << "[SKIP] paper-scale replication (set ISRSGN_RUN_PAPERSCALE=1 to run; "
                 "expected multi-hour)\n";
    return 77;
  }
  auto t0 = std::chrono::steady_clock::now();
  Reporter r{"paper-scale split-step replication (validation grid)"};
  SimConfig cfg;
  cfg.fiber = fiber_table1(false);
  cfg.spectrum = spectrum_1a(25.0);
  for (auto& ch : cfg.spectrum.channels) ch.symbol_rate_baud = 10e9;
  cfg.symbols_log2 = 15;
  cfg.step_m = 5.0;
  cfg.seed = 1;
  cfg.memory_budget_bytes = 16e9;
  const auto sim = ssfm_simulate(cfg);
  QuadratureOptions q;
  q.rel_tol = 1e-4;
  const auto model =
      compute_nli(cfg.spectrum, cfg.fiber, 1, ModelVariant::IsrsAnalytical, q);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < model.channels.size(); ++i)
    worst = std::max(worst,
                     std::abs(db(sim.channels[i].eta_per_w2 / model.channels[i].eta_per_w2)));
  r.check(worst <= 0.1, "max interior |delta eta| = " + num(worst) + " dB <= 0.1 dB");
  return r.finish(t0);
}

// --- criterion 7 -----------------------------------------------------------

int criterion_7() {
  auto t0 = std::chrono::steady_clock::now();
  Reporter r{"criterion 7: wideband case study"};
  const auto fiber = fiber_table1(true);
  auto fiber_flat = fiber;
  fiber_flat.raman_slope_per_w_m_hz = 0.0;
  const auto spec = spectrum_1b(24.0);
  QuadratureOptions q;
  q.rel_tol = 3e-4;

  std::cerr << "criterion 7: n=1 runs\n";
  const auto isrs_1 = compute_nli(spec, fiber, 1, ModelVariant::IsrsAnalytical, q);
  const auto flat_1 = compute_nli(spec, fiber_flat, 1, ModelVariant::ConventionalGn, q);
  std::cerr << "criterion 7: n=10 runs\n";
  const auto isrs_10 = compute_nli(spec, fiber, 10, ModelVariant::IsrsAnalytical, q);
  const auto flat_10 = compute_nli(spec, fiber_flat, 10, ModelVariant::ConventionalGn, q);

  const std::size_t n_ch = spec.channels.size();
  const double change_lo = db(isrs_1.channels.front().eta_per_w2 /
                              flat_1.channels.front().eta_per_w2);
  const double change_hi =
      db(isrs_1.channels.back().eta_per_w2 / flat_1.channels.back().eta_per_w2);
  r.check(std::abs(change_lo - 2.0) <= 0.2,
          "NLI change at the low-frequency edge = " + num(change_lo) + " dB (target +2.0 +- 0.2)");
  r.check(std::abs(change_hi + 1.7) <= 0.2,
          "NLI change at the high-frequency edge = " + num(change_hi) + " dB (target -1.7 +- 0.2)");

  std::vector<double> fx, fy;
  for (const auto& ch : isrs_1.channels) {
    if (std::abs(ch.f_hz) <= 4e12) {
      fx.push_back(ch.f_hz / 1e12);
      fy.push_back(db(ch.eta_per_w2));
    }
  }
  const double slope = fit_line(fx, fy).slope;
  r.check(std::abs(slope + 0.24) <= 0.03,
          "mid-band NLI slope = " + num(slope) + " dB/THz (target -0.24 +- 0.03)");

  double eps_sum = 0.0, eps_max = 0.0;
  std::vector<double> eps_flat(n_ch), eps_isrs(n_ch);
  for (std::size_t i = 0; i < n_ch; ++i) {
    eps_flat[i] = coherence_factor(flat_1.channels[i].eta_per_w2,
                                   flat_10.channels[i].eta_per_w2, 10);
    eps_isrs[i] = coherence_factor(isrs_1.channels[i].eta_per_w2,
                                   isrs_10.channels[i].eta_per_w2, 10);
    eps_sum += eps_flat[i];
    eps_max = std::max(eps_max, std::max(eps_flat[i], eps_isrs[i]));
  }
  const double eps_avg = eps_sum / static_cast<double>(n_ch);
  r.check(std::abs(eps_avg - 0.027) <= 0.005,
          "band-average coherence factor (no tilt) = " + num(eps_avg) + " (target 0.027 +- 0.005)");
  r.check(eps_max < 0.07, "max coherence factor = " + num(eps_max) + " < 0.07");

  double shift_max = 0.0;
  std::size_t shift_arg = 0;
  for (std::size_t i = 0; i < n_ch; ++i) {
    const double s = std::abs(eps_isrs[i] - eps_flat[i]);
    if (s > shift_max) {
      shift_max = s;
      shift_arg = i;
    }
  }
  const bool at_edge = shift_arg <= 2 || shift_arg + 3 >= n_ch;
  r.check(std::abs(shift_max - 0.013) <= 0.005 && at_edge,
          "max coherence-factor shift at 24 dBm = " + num(shift_max) +
              " at channel index " + std::to_string(shift_arg) + " (target 0.013 +- 0.005 at the edges)");
  return r.finish(t0);
}

// --- criterion 8 -----------------------------------------------------------

int criterion_8() {
  auto t0 = std::chrono::steady_clock::now();
  Reporter r{"criterion 8: baseline benchmarks"};
  const auto fiber = fiber_table1(true);
  QuadratureOptions q;
  q.rel_tol = 3e-4;
  double max_eff[2] = {0.0, 0.0}, max_swp[2] = {0.0, 0.0};
  const double powers[2] = {24.0, 28.0};
  for (int pi = 0; pi < 2; ++pi) {
    const auto spec = spectrum_1b(powers[pi]);
    std::cerr << "criterion 8: P=" << powers[pi] << " dBm\n";
    const auto ref = compute_nli(spec, fiber, 1, ModelVariant::IsrsAnalytical, q);
    const auto swp = compute_nli(spec, fiber, 1, ModelVariant::BaselineSwappedRho, q);
    const auto eff = compute_nli(spec, fiber, 1, ModelVariant::BaselineEffectiveAtt, q);
    for (std::size_t i = 0; i < ref.channels.size(); ++i) {
      max_swp[pi] = std::max(max_swp[pi], std::abs(db(swp.channels[i].eta_per_w2 /
                                                      ref.channels[i].eta_per_w2)));
      max_eff[pi] = std::max(max_eff[pi], std::abs(db(eff.channels[i].eta_per_w2 /
                                                      ref.channels[i].eta_per_w2)));
    }
  }
  r.check(max_eff[0] <= 0.19, "effective-attenuation deviation at 24 dBm = " + num(max_eff[0]) +
                                  " dB <= 0.19 dB");
  r.check(std::abs(max_eff[1] - 0.8) <= 0.1,
          "effective-attenuation deviation at 28 dBm = " + num(max_eff[1]) +
              " dB (target 0.8 +- 0.1)");
  r.check(std::abs(max_swp[0] - 0.56) <= 0.1,
          "swapped-profile deviation at 24 dBm = " + num(max_swp[0]) + " dB (target 0.56 +- 0.1)");
  r.check(std::abs(max_swp[1] - 2.1) <= 0.15,
          "swapped-profile deviation at 28 dBm = " + num(max_swp[1]) + " dB (target 2.1 +- 0.15)");
  return r.finish(t0);
}

// --- criterion 9 -----------------------------------------------------------

int criterion_9() {
  auto t0 = std::chrono::steady_clock::now();
  Reporter r{"criterion 9: always-on property pack"};

  {  // phased-array brute-force equivalence
    bool ok = true;
    for (double phi : {0.03, 0.7, 2.2, 6.28318530717958}) {
      for (int n : {2, 5, 10}) {
        std::complex<double> s(0, 0);
        for (int k = 0; k < n; ++k) s += std::polar(1.0, phi * k);
        ok = ok && std::abs(phased_array_factor(phi, n) - std::norm(s)) <=
                       1e-8 * std::max(1.0, std::norm(s));
      }
    }
    r.check(ok, "phased-array factor equals the brute-force geometric sum");
  }

  {  // closed-form profile conserves total power for an asymmetric comb
    auto fiber = fiber_table1(true);
    fiber.raman_slope_per_w_m_hz *= 10;
    auto spec = build_flat_spectrum(0.3, 2e12, 8, 0.25e12);
    for (std::size_t i = 0; i < spec.channels.size(); ++i)
      spec.channels[i].power_w *= (1.0 + 0.25 * static_cast<double>(i));
    const auto prof = make_analytical_profile(spec, fiber);
    bool ok = true;
    for (double z : {30e3, 100e3}) {
      const int n = 40000;
      double integral = 0.0;
      const double lo = spec.band_lo(), hi = spec.band_hi();
      for (int i = 0; i < n; ++i) {
        const double f = lo + (hi - lo) * (i + 0.5) / n;
        integral += spec.psd(f) * prof.rho(z, f);
      }
      integral *= (hi - lo) / n;
      ok = ok && std::abs(integral / (spec.total_power() * std::exp(-fiber.alpha_per_m * z)) -
                          1.0) < 1e-6;
    }
    r.check(ok, "closed-form profile conserves total power (asymmetric PSD)");
  }

  {  // cubic power scaling
    auto fiber = fiber_table1(false);
    const auto prof = flat_exponential_profile(fiber);
    auto spec = build_flat_spectrum(5e-3, 5 * 25e9, 5, 25e9);
    const double f = spec.channels[2].center_hz;
    const double g1 = nli_psd_general(spec, fiber, prof, 1, f, 1e-3);
    for (auto& ch : spec.channels) ch.power_w *= 2.0;
    const double g8 = nli_psd_general(spec, fiber, prof, 1, f, 1e-3);
    r.check(std::abs(g8 / g1 - 8.0) <= 1e-10 * 8.0, "NLI scales cubically with launch power");
  }

  {  // f1 <-> f2 symmetry via folded tensor quadrature
    auto fiber = fiber_table1(true);
    const auto spec = spectrum_1b(24.0);
    const auto prof = make_analytical_profile(spec, fiber);
    auto kern = SpanKernel::make(prof, fiber);
    const auto& gl = gauss_legendre(12);
    const double f = -2e12, half = 0.4 * spec.total_bandwidth();
    double full = 0.0, folded = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
      for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
        const double f1 = f + half * gl.nodes[i], f2 = f + half * gl.nodes[j];
        const double g = spec.psd(f1) * spec.psd(f2) * spec.psd(f1 + f2 - f);
        if (g == 0.0) continue;
        const double kappa =
            phase_mismatch_rate(f1, f2, f, fiber.beta2_s2_per_m, fiber.beta3_s3_per_m);
        const double v = g * std::norm(kern.lk_triplet(f1, f2, f, kappa));
        const double w = gl.weights[i] * gl.weights[j];
        full += w * v;
        folded += (j > i) ? 2.0 * w * v : (j == i ? w * v : 0.0);
      }
    r.check(std::abs(folded / full - 1.0) <= 1e-12, "mixing integrand is f1 <-> f2 symmetric");
  }

  {  // gamma = 0 and C_r = 0 degeneracies
    auto fiber = fiber_table1(false);
    const auto spec = build_flat_spectrum(5e-3, 5 * 25e9, 5, 25e9);
    auto f0 = fiber;
    f0.gamma_per_w_m = 0.0;
    const auto zero = compute_nli(spec, f0, 1, ModelVariant::IsrsAnalytical);
    bool ok = true;
    for (const auto& ch : zero.channels) ok = ok && ch.g_nli_w_per_hz == 0.0;
    r.check(ok, "zero nonlinearity coefficient gives zero NLI");

    auto fc = fiber;
    fc.raman_slope_per_w_m_hz = 0.0;
    QuadratureOptions q;
    const auto isrs = compute_nli(spec, fc, 1, ModelVariant::IsrsAnalytical, q);
    const auto conv = compute_nli(spec, fc, 1, ModelVariant::ConventionalGn, q);
    double worst = 0.0;
    for (std::size_t i = 0; i < isrs.channels.size(); ++i)
      worst = std::max(worst, std::abs(db(isrs.channels[i].g_nli_w_per_hz /
                                          conv.channels[i].g_nli_w_per_hz)));
    r.check(worst <= 1e-6, "zero Raman slope reproduces the conventional model");
  }

  {  // simulator seed determinism
    SimConfig cfg;
    cfg.fiber = fiber_table1(false);
    cfg.spectrum = build_flat_spectrum(2e-3, 3 * 10.001e9, 3, 10.001e9);
    for (auto& ch : cfg.spectrum.channels) ch.symbol_rate_baud = 10e9;
    cfg.symbols_log2 = 9;
    cfg.step_m = 2e3;
    cfg.seed = 99;
    const auto a = ssfm_simulate(cfg);
    const auto b = ssfm_simulate(cfg);
    bool ok = true;
    for (std::size_t i = 0; i < a.channels.size(); ++i)
      ok = ok && a.channels[i].snr_db == b.channels[i].snr_db &&
           a.channels[i].eta_per_w2 == b.channels[i].eta_per_w2;
    r.check(ok, "identical seeds give bit-identical simulation results");
  }

  return r.finish(t0);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <1..9|paperscale>\n";
    return 2;
  }
  const std::string arg = argv[1];
  try {
    if (arg == "paperscale") return criterion_paperscale();
    switch (std::atoi(arg.c_str())) {
      case 1: return criterion_1();
      case 2: return criterion_2();
      case 3: return criterion_3();
      case 4: return criterion_4();
      case 5: return criterion_5();
      case 6: return criterion_6();
      case 7: return criterion_7();
      case 8: return criterion_8();
      case 9: return criterion_9();
      default:
        std::cerr << "unknown criterion '" << arg << "'\n";
        return 2;
    }
  } catch (const std::exception& e) {
    std::cout << "[FAIL] criterion " << arg << ": exception: " << e.what() << "\n";
    return 1;
  }
}
