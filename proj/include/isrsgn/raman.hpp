#pragma once

#include <string>
#include <vector>

#include "isrsgn/spectrum.hpp"

namespace isrsgn {

// L_eff(z) = (1 - e^{-alpha z}) / alpha.
double effective_length(double alpha_per_m, double z_m);

// Spectral-edge power transfer of the closed-form profile, in dB:
// 10/ln10 · P_tot·C_r·L_eff·B. Independent of the PSD shape.
double edge_power_transfer_db(double p_tot_w, double c_r_per_w_m_hz, double l_eff_m, double b_hz);

// Normalized signal power profile rho(z, f) along one span.
//
// Kinds:
//   FlatExponential  rho = e^{-alpha z}, frequency flat.
//   AnalyticalIsrs   closed form for a linear Raman-gain slope:
//                    rho = P_tot e^{-alpha z - x f} / ∫ G_Tx(v) e^{-x v} dv,
//                    x = P_tot·C_r·L_eff(z); denominator evaluated exactly
//                    for the piecewise-constant PSD.
//   SampledGrid      tabulated on (z, f) with bilinear interpolation; f is
//                    clamped to the outermost channel centers.
struct PowerProfile {
  enum class Kind { FlatExponential, AnalyticalIsrs, SampledGrid };

  struct Band {  // piecewise-constant PSD segment
    double lo = 0.0, hi = 0.0, psd = 0.0;
  };

  Kind kind = Kind::FlatExponential;
  double alpha = 0.0;       // decay rate used by FlatExponential / AnalyticalIsrs, 1/m
  double alpha_bar = 0.0;   // band-average attenuation, used by net-gain normalization
  double length_m = 0.0;

  // AnalyticalIsrs
  double p_tot = 0.0;
  double c_r = 0.0;                 // 1/(W·m·Hz)
  std::vector<Band> bands;
  double f_lo = 0.0, f_hi = 0.0;    // valid frequency window (band support)

  // SampledGrid
  std::vector<double> z_grid;       // ascending, starts at 0, ends at length
  std::vector<double> f_grid;       // channel centers, ascending
  std::vector<double> rho_zf;       // row-major [z][f]

  std::vector<std::string> warnings;

  double rho(double z_m, double f_hz) const;
  // Tilt coefficient x(z) = P_tot·C_r·L_eff(z) (AnalyticalIsrs only).
  double tilt_x(double z_m) const;
  // ∫ G_Tx(v) e^{-x v} dv, exact for the stored piecewise-constant PSD.
  double psd_exp_moment(double x) const;

  bool covers(double f_hz) const;
};

PowerProfile flat_exponential_profile(const FiberSpec& fiber);
PowerProfile flat_exponential_profile(double alpha_per_m, double length_m);

// Closed-form ISRS profile from the linear gain slope. Rejects total
// bandwidths beyond the linear-gain validity window (~15 THz).
PowerProfile make_analytical_profile(const WdmSpectrum& spectrum, const FiberSpec& fiber);

// Point evaluation of the closed form.
double analytical_profile(const WdmSpectrum& spectrum, const FiberSpec& fiber, double z_m,
                          double f_hz);

enum class PhotonFactor { AsPrinted, Inverted, None };

struct RamanOdeOptions {
  double step_m = 100.0;          // initial RK4 step
  double rel_tol = 1e-6;          // step-halving target on rho(L, f)
  int max_halvings = 6;
  PhotonFactor photon_factor = PhotonFactor::AsPrinted;
};

// Coupled-power ISRS ODE along one span, RK4 with step-halving validation.
// Returns a SampledGrid profile on z_grid x channel centers.
PowerProfile solve_raman_ode(const WdmSpectrum& spectrum, const FiberSpec& fiber,
                             const std::vector<double>& z_grid,
                             const RamanOdeOptions& opts = {});

// ISRS-only tilt in dB: 10·log10(rho(z,f)·e^{+alpha_bar·z}).
double isrs_net_gain_db(const PowerProfile& profile, double z_m, double f_hz);

// Resamples any profile onto a uniform z-grid (keeps channel-center f grid for
// sampled profiles); used to feed the mixing kernel a denser grid.
PowerProfile resample_profile(const PowerProfile& profile, const WdmSpectrum& spectrum,
                              int z_points);

void write_profile_csv(const std::string& path, const PowerProfile& profile,
                       const WdmSpectrum& spectrum, const std::vector<double>& z_samples);

}  // namespace isrsgn
