#pragma once

#include <vector>

#include "isrsgn/gn_engine.hpp"
#include "isrsgn/raman.hpp"
#include "isrsgn/spectrum.hpp"

namespace isrsgn {

// Equally spaced tone comb: tone k sits at index_offset(k)*f0 with PSD weight
// g[k]. Models the periodic-signal limit of the transmitted field where every
// tone carries an independent circular-Gaussian phasor.
struct ToneComb {
  double f0_hz = 0.0;            // tone spacing
  std::vector<double> psd_w_per_hz;  // per-tone PSD weights G_Tx(f_k)
  int first_index = 0;           // tone k has frequency (first_index + k) * f0

  int tone_count() const { return static_cast<int>(psd_w_per_hz.size()); }
  double frequency(int k) const { return (first_index + k) * f0_hz; }

  // Flat comb spanning `tones` tones centered on 0 with total power p_tot
  // spread evenly (PSD weight p_tot / (tones * f0) per tone).
  static ToneComb flat(double p_tot_w, double f0_hz, int tones);
};

struct CombPsd {
  std::vector<int> indices;      // absolute tone indices (frequency = index * f0)
  std::vector<double> g_nli;     // NLI PSD per tone, W/Hz (tone power / f0)
  double at_index(int index) const;
  double at_frequency(double f_hz, double f0_hz) const { return at_index(static_cast<int>(std::lround(f_hz / f0_hz))); }
};

// First-order perturbation NLI of the tone comb: explicit sum over the
// non-degenerate triplets (m, n, k) with f_m - f_n + f_k = f_i, m != n and
// k != n. The distance integral uses the same piecewise-exponential
// oscillatory integrator as the continuum engine, but the exponent
// composition (which frequency attenuates how, and the full phase
// f_m^2 - f_n^2 + f_k^2 - f_i^2 form) is assembled directly from the four
// tone frequencies, independently of the engine's reduced formulas.
//
// The result is referred to the span output after ideal loss compensation,
// matching the continuum model's convention. For span_count > 1 the
// phased-array factor is applied exactly per triplet.
CombPsd rp_comb_psd(const ToneComb& comb, const FiberSpec& fiber, const PowerProfile& profile,
                    double z_m, int span_count = 1,
                    Polarization pol = Polarization::Dual, int max_tones = 64);

// Continuum-equivalent spectrum for comparing the comb against the engine:
// gapless piecewise-constant PSD with one channel per tone.
WdmSpectrum comb_to_spectrum(const ToneComb& comb, double ref_frequency_hz = 193.4e12);

}  // namespace isrsgn
