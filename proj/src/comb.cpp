#include "isrsgn/comb.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "isrsgn/errors.hpp"
#include "isrsgn/span_kernel.hpp"

namespace isrsgn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ToneComb ToneComb::flat(double p_tot_w, double f0_hz, int tones) {
  if (p_tot_w <= 0 || f0_hz <= 0 || tones < 1) throw config_error("ToneComb::flat: bad arguments");
  ToneComb c;
  c.f0_hz = f0_hz;
  c.first_index = -(tones - 1) / 2;
  if ((tones - 1) % 2 != 0)
    throw config_error("ToneComb::flat: tone count must be odd so the comb is centered");
  c.psd_w_per_hz.assign(static_cast<std::size_t>(tones), p_tot_w / (tones * f0_hz));
  return c;
}

double CombPsd::at_index(int index) const {
  for (std::size_t i = 0; i < indices.size(); ++i)
    if (indices[i] == index) return g_nli[i];
  throw config_error("CombPsd: no tone at index " + std::to_string(index));
}

CombPsd rp_comb_psd(const ToneComb& comb, const FiberSpec& fiber, const PowerProfile& profile,
                    double z_m, int span_count, Polarization pol, int max_tones) {
  const int t = comb.tone_count();
  if (t < 1) throw config_error("rp_comb_psd: empty comb");
  if (t > max_tones)
    throw resource_error("rp_comb_psd: " + std::to_string(t) + " tones exceeds the limit of " +
                         std::to_string(max_tones));
  if (comb.f0_hz <= 0) throw config_error("rp_comb_psd: tone spacing must be positive");
  if (span_count < 1) throw config_error("rp_comb_psd: span count must be >= 1");
  if (span_count > 1 && std::abs(z_m - profile.length_m) > 1e-6)
    throw config_error("rp_comb_psd: multi-span evaluation requires z = span length");

  // z nodes for the distance integral: reuse the profile grid when sampled,
  // otherwise a uniform grid fine enough for the piecewise-exponential
  // interpolant (Richardson-corrected inside lk_fixed).
  std::vector<double> z_nodes;
  if (profile.kind == PowerProfile::Kind::SampledGrid) {
    for (double z : profile.z_grid)
      if (z <= z_m + 1e-9) z_nodes.push_back(std::min(z, z_m));
    if (z_nodes.back() < z_m) z_nodes.push_back(z_m);
  } else {
    const int n = 512;
    z_nodes.resize(n + 1);
    for (int i = 0; i <= n; ++i) z_nodes[i] = z_m * i / n;
  }

  PowerProfile clipped;  // kernel wants a grid ending at the evaluation distance
  clipped.kind = PowerProfile::Kind::SampledGrid;
  clipped.length_m = z_m;
  clipped.alpha = profile.alpha;
  clipped.alpha_bar = profile.alpha_bar;
  clipped.z_grid = z_nodes;
  clipped.f_grid = {0.0, 1.0};  // placeholder; envelopes are fed explicitly below
  clipped.rho_zf.assign(z_nodes.size() * 2, 1.0);
  auto kern = SpanKernel::make(clipped, fiber, false);

  // rho sampled per tone frequency once.
  const int lo = comb.first_index, hi = comb.first_index + t - 1;
  const int out_lo = 2 * lo - hi, out_hi = 2 * hi - lo;
  std::vector<std::vector<double>> rho_tone(static_cast<std::size_t>(out_hi - out_lo + 1));
  for (int idx = out_lo; idx <= out_hi; ++idx) {
    auto& col = rho_tone[static_cast<std::size_t>(idx - out_lo)];
    col.resize(z_nodes.size());
    for (std::size_t k = 0; k < z_nodes.size(); ++k)
      col[k] = profile.rho(z_nodes[k], idx * comb.f0_hz);
  }
  auto rho_at = [&](int idx) -> const std::vector<double>& {
    return rho_tone[static_cast<std::size_t>(idx - out_lo)];
  };

  const double pref =
      (pol == Polarization::Dual ? 16.0 / 27.0 : 2.0) * fiber.gamma_per_w_m * fiber.gamma_per_w_m;
  const double f0 = comb.f0_hz;

  CombPsd out;
  std::vector<double> env(z_nodes.size());
  for (int i = out_lo; i <= out_hi; ++i) {
    const double fi = i * f0;
    const double fi2 = fi * fi, fi3 = fi2 * fi;
    double acc = 0.0;
    for (int m = lo; m <= hi; ++m) {
      const double gm = comb.psd_w_per_hz[static_cast<std::size_t>(m - lo)];
      if (gm == 0.0) continue;
      for (int k = lo; k <= hi; ++k) {
        const int n = m + k - i;
        if (n < lo || n > hi) continue;
        if (m == n || k == n) continue;  // degenerate: deterministic phase only
        const double gk = comb.psd_w_per_hz[static_cast<std::size_t>(k - lo)];
        const double gn = comb.psd_w_per_hz[static_cast<std::size_t>(n - lo)];
        if (gk == 0.0 || gn == 0.0) continue;
        const double fm = m * f0, fk = k * f0, fn = n * f0;
        // Phase rate from the raw quartic frequency combination.
        const double kappa =
            2.0 * kPi * kPi * fiber.beta2_s2_per_m * (fm * fm - fn * fn + fk * fk - fi2) +
            (4.0 / 3.0) * kPi * kPi * kPi * fiber.beta3_s3_per_m *
                (fm * fm * fm - fn * fn * fn + fk * fk * fk - fi3);
        const auto& rm = rho_at(m);
        const auto& rn = rho_at(n);
        const auto& rk = rho_at(k);
        const auto& ri = rho_at(i);
        for (std::size_t zz = 0; zz < env.size(); ++zz)
          env[zz] = std::sqrt(rm[zz] * rn[zz] * rk[zz] / ri[zz]);
        double lk2 = std::norm(kern.lk_fixed(env, kappa));
        if (span_count > 1) lk2 *= phased_array_factor(kappa * z_m, span_count);
        acc += gm * gk * gn * lk2;
      }
    }
    // Tone power is pref * f0^3 * acc; dividing by the spacing gives the PSD
    // comparable with the continuum model at the tone frequency.
    out.indices.push_back(i);
    out.g_nli.push_back(pref * f0 * f0 * acc);
  }
  return out;
}

WdmSpectrum comb_to_spectrum(const ToneComb& comb, double ref_frequency_hz) {
  WdmSpectrum s;
  s.ref_frequency_hz = ref_frequency_hz;
  for (int k = 0; k < comb.tone_count(); ++k) {
    Channel ch;
    ch.center_hz = comb.frequency(k);
    ch.bandwidth_hz = comb.f0_hz;
    ch.symbol_rate_baud = comb.f0_hz;
    ch.power_w = comb.psd_w_per_hz[static_cast<std::size_t>(k)] * comb.f0_hz;
    s.channels.push_back(ch);
  }
  s.validate();
  return s;
}

}  // namespace isrsgn
