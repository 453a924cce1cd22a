#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace isrsgn {

// One WDM channel. Frequencies are relative to the band center (f = 0 at the
// middle of the spectrum); the absolute reference lives on WdmSpectrum.
struct Channel {
  double center_hz = 0.0;
  double symbol_rate_baud = 0.0;
  double bandwidth_hz = 0.0;  // PSD support width B_ch
  double power_w = 0.0;       // launch power P_i
};

struct WdmSpectrum {
  std::vector<Channel> channels;        // sorted by center frequency
  double ref_frequency_hz = 193.4e12;   // absolute frequency of f = 0

  double total_power() const;
  double total_bandwidth() const;       // highest support edge - lowest support edge
  double band_lo() const;
  double band_hi() const;

  // Input PSD G_Tx(f): P_i / B_ch on channel i's support, 0 elsewhere.
  double psd(double f_hz) const;

  // Frequencies where G_Tx changes value (channel edges across power steps or
  // gaps, plus the band ends). Sorted ascending.
  std::vector<double> psd_breakpoints() const;

  int nearest_channel(double f_hz) const;
  double absolute_frequency(double f_hz) const { return ref_frequency_hz + f_hz; }

  void validate() const;  // throws config_error on invariant violation
};

// Piecewise linear sampled curve vs frequency offset; clamped outside the grid.
struct SampledCurve {
  std::vector<double> x;
  std::vector<double> y;
  double at(double xq) const;
  bool empty() const { return x.empty(); }
};

struct FiberSpec {
  double alpha_per_m = 0.0;    // power attenuation, 1/m
  std::optional<SampledCurve> alpha_curve;  // 1/m vs Hz (relative), overrides scalar per channel
  double beta2_s2_per_m = 0.0;
  double beta3_s3_per_m = 0.0;
  double gamma_per_w_m = 0.0;
  double raman_slope_per_w_m_hz = 0.0;      // C_r
  std::optional<SampledCurve> raman_gain_curve;  // pol-averaged g(Δf), 1/(W·m) vs Hz, g(0)=0
  double length_m = 0.0;

  double alpha_at(double f_hz) const;
  double alpha_band_average(double f_lo, double f_hi) const;
  // ISRS coupling for a frequency separation: supplied curve when present,
  // otherwise the linear slope C_r·Δf (clamped non-negative).
  double raman_coupling(double delta_f_hz) const;

  void validate() const;
};

struct LinkSpec {
  FiberSpec span;
  int span_count = 1;          // identical spans; loss exactly compensated per span
  double noise_figure_db = 5.0;

  void validate() const;
};

// Uniform comb carrying P_tot split evenly over `channel_count` channels of
// support width b_ch_hz inside total bandwidth b_hz.
WdmSpectrum build_flat_spectrum(double p_tot_w, double b_hz, int channel_count, double b_ch_hz);

// D [s/m^2], S [s/m^3] at reference_wavelength [m] -> (beta2 [s^2/m], beta3 [s^3/m]).
std::pair<double, double> convert_dispersion(double d_si, double s_si, double reference_wavelength_m);

// Same conversion from engineering units: ps/nm/km, ps/nm^2/km, nm.
std::pair<double, double> convert_dispersion_eng(double d_ps_nm_km, double s_ps_nm2_km,
                                                 double lambda_nm);

}  // namespace isrsgn
