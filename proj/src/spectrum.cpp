#include "isrsgn/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isrsgn/errors.hpp"
#include "isrsgn/units.hpp"

namespace isrsgn {

double WdmSpectrum::total_power() const {
  double p = 0.0;
  for (const auto& ch : channels) p += ch.power_w;
  return p;
}

double WdmSpectrum::band_lo() const {
  return channels.front().center_hz - 0.5 * channels.front().bandwidth_hz;
}

double WdmSpectrum::band_hi() const {
  return channels.back().center_hz + 0.5 * channels.back().bandwidth_hz;
}

double WdmSpectrum::total_bandwidth() const { return band_hi() - band_lo(); }

double WdmSpectrum::psd(double f_hz) const {
  // Channels are sorted; find the first channel whose upper edge is >= f.
  auto it = std::lower_bound(channels.begin(), channels.end(), f_hz,
                             [](const Channel& c, double f) {
                               return c.center_hz + 0.5 * c.bandwidth_hz < f;
                             });
  if (it == channels.end()) return 0.0;
  if (f_hz < it->center_hz - 0.5 * it->bandwidth_hz) return 0.0;
  return it->power_w / it->bandwidth_hz;
}

std::vector<double> WdmSpectrum::psd_breakpoints() const {
  std::vector<double> pts;
  const double eps = 1e-3;  // Hz; edges closer than this are one point
  double prev_hi = band_lo();
  double prev_psd = 0.0;
  for (const auto& ch : channels) {
    const double lo = ch.center_hz - 0.5 * ch.bandwidth_hz;
    const double hi = ch.center_hz + 0.5 * ch.bandwidth_hz;
    const double g = ch.power_w / ch.bandwidth_hz;
    if (lo - prev_hi > eps) {
      // gap: PSD drops to zero and back
      if (prev_psd != 0.0) pts.push_back(prev_hi);
      pts.push_back(lo);
    } else if (g != prev_psd) {
      pts.push_back(lo);
    }
    prev_hi = hi;
    prev_psd = g;
  }
  pts.insert(pts.begin(), band_lo());
  pts.push_back(band_hi());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [eps](double a, double b) { return std::abs(a - b) <= eps; }),
            pts.end());
  return pts;
}

int WdmSpectrum::nearest_channel(double f_hz) const {
  auto it = std::lower_bound(channels.begin(), channels.end(), f_hz,
                             [](const Channel& c, double f) { return c.center_hz < f; });
  if (it == channels.begin()) return 0;
  if (it == channels.end()) return static_cast<int>(channels.size()) - 1;
  auto prev = std::prev(it);
  return (f_hz - prev->center_hz <= it->center_hz - f_hz)
             ? static_cast<int>(prev - channels.begin())
             : static_cast<int>(it - channels.begin());
}

void WdmSpectrum::validate() const {
  if (channels.empty()) throw config_error("spectrum: no channels");
  if (ref_frequency_hz <= 0) throw config_error("spectrum: reference frequency must be positive");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const auto& ch = channels[i];
    if (ch.bandwidth_hz <= 0) throw config_error("spectrum: channel bandwidth must be positive");
    if (ch.power_w < 0) throw config_error("spectrum: negative channel power");
    if (i > 0) {
      const auto& prev = channels[i - 1];
      if (ch.center_hz <= prev.center_hz)
        throw config_error("spectrum: channels must be sorted by center frequency");
      const double spacing = ch.center_hz - prev.center_hz;
      const double need = 0.5 * (ch.bandwidth_hz + prev.bandwidth_hz);
      if (spacing < need * (1.0 - 1e-9))
        throw config_error("spectrum: overlapping channel supports at index " + std::to_string(i));
    }
  }
  if (absolute_frequency(band_lo()) <= 0)
    throw config_error("spectrum: band extends to non-positive absolute frequency");
}

double SampledCurve::at(double xq) const {
  if (x.empty()) return 0.0;
  if (xq <= x.front()) return y.front();
  if (xq >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), xq);
  std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double t = (xq - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + t * (y[i] - y[i - 1]);
}

double FiberSpec::alpha_at(double f_hz) const {
  if (alpha_curve && !alpha_curve->empty()) return alpha_curve->at(f_hz);
  return alpha_per_m;
}

double FiberSpec::alpha_band_average(double f_lo, double f_hi) const {
  if (!alpha_curve || alpha_curve->empty()) return alpha_per_m;
  const int n = 64;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += alpha_curve->at(f_lo + (i + 0.5) * (f_hi - f_lo) / n);
  return s / n;
}

double FiberSpec::raman_coupling(double delta_f_hz) const {
  if (delta_f_hz <= 0) return 0.0;
  if (raman_gain_curve && !raman_gain_curve->empty()) return std::max(0.0, raman_gain_curve->at(delta_f_hz));
  return std::max(0.0, raman_slope_per_w_m_hz * delta_f_hz);
}

void FiberSpec::validate() const {
  if (alpha_per_m <= 0) throw config_error("fiber: attenuation must be positive");
  if (alpha_curve) {
    for (double a : alpha_curve->y)
      if (a <= 0) throw config_error("fiber: attenuation curve must be positive everywhere");
  }
  if (length_m <= 0) throw config_error("fiber: length must be positive");
  if (raman_slope_per_w_m_hz < 0) throw config_error("fiber: Raman slope must be non-negative");
  if (gamma_per_w_m < 0) throw config_error("fiber: gamma must be non-negative");
  if (raman_gain_curve && !raman_gain_curve->empty()) {
    const auto& c = *raman_gain_curve;
    if (c.x.size() != c.y.size() || c.x.size() < 2)
      throw config_error("fiber: Raman gain curve needs >= 2 (delta_f, gain) samples");
    if (std::abs(c.at(0.0)) > 1e-12) throw config_error("fiber: Raman gain curve must have g(0) = 0");
    for (double g : c.y)
      if (g < 0) throw config_error("fiber: Raman gain curve must be non-negative");
  }
}

void LinkSpec::validate() const {
  span.validate();
  if (span_count < 1) throw config_error("link: span count must be >= 1");
}

WdmSpectrum build_flat_spectrum(double p_tot_w, double b_hz, int channel_count, double b_ch_hz) {
  if (p_tot_w <= 0) throw config_error("build_flat_spectrum: total power must be positive");
  if (b_hz <= 0 || b_ch_hz <= 0) throw config_error("build_flat_spectrum: bandwidth must be positive");
  if (channel_count < 1) throw config_error("build_flat_spectrum: need at least one channel");
  if (channel_count * b_ch_hz > b_hz * (1.0 + 1e-9))
    throw config_error("build_flat_spectrum: channels do not fit in the total bandwidth");
  WdmSpectrum s;
  const double spacing = b_hz / channel_count;
  const double p_ch = p_tot_w / channel_count;
  s.channels.reserve(static_cast<std::size_t>(channel_count));
  for (int i = 0; i < channel_count; ++i) {
    Channel ch;
    ch.center_hz = (i - 0.5 * (channel_count - 1)) * spacing;
    ch.bandwidth_hz = b_ch_hz;
    ch.symbol_rate_baud = b_ch_hz;
    ch.power_w = p_ch;
    s.channels.push_back(ch);
  }
  s.validate();
  return s;
}

std::pair<double, double> convert_dispersion(double d_si, double s_si, double lambda_m) {
  if (lambda_m <= 0) throw config_error("convert_dispersion: wavelength must be positive");
  const double two_pi_c = 2.0 * 3.14159265358979323846 * phys::c_light;
  const double k = lambda_m * lambda_m / two_pi_c;  // m·s
  const double beta2 = -d_si * k;
  const double beta3 = k * k * (s_si + 2.0 * d_si / lambda_m);
  return {beta2, beta3};
}

std::pair<double, double> convert_dispersion_eng(double d_ps_nm_km, double s_ps_nm2_km,
                                                 double lambda_nm) {
  // ps/nm/km = 1e-6 s/m^2, ps/nm^2/km = 1e3 s/m^3
  return convert_dispersion(d_ps_nm_km * 1e-6, s_ps_nm2_km * 1e3, lambda_nm * 1e-9);
}

}  // namespace isrsgn
