#pragma once

#include <functional>
#include <string>
#include <vector>

#include "isrsgn/gn_engine.hpp"
#include "isrsgn/spectrum.hpp"

namespace isrsgn {

// eta = B_ch * G(f_i) / P_i^3 under the locally-flat NLI PSD approximation.
double eta_from_psd(double g_at_fi_w_per_hz, double b_ch_hz, double p_i_w);

// 10*log10( P / (P_ase + eta*P^3) ); returns +inf when the noise is zero.
double snr_db(double p_i_w, double p_ase_w, double eta_per_w2);

// ASE power over one channel bandwidth after n spans, dual-polarization
// convention: P_ase = n * F * h * nu * (G - 1) * B_ch with F and G linear.
// span_gain_db is the per-span amplifier gain for that channel (the inverse
// of its span loss under ideal gain flattening).
double ase_total(double noise_figure_db, double span_gain_db, double center_frequency_abs_hz,
                 double b_ch_hz, int span_count);

// Coherence exponent from the two-point accumulation law
// eta_n[dB] - eta_1[dB] = (1+eps) * n[dB].
double coherence_factor(double eta_1, double eta_n, int span_count);

// Least-squares variant over a set of (n, eta_n) points in dB-dB space.
double coherence_factor_fit(const std::vector<int>& spans, const std::vector<double>& etas);

// Loose upper bound on the NLI-coefficient deviation caused by a frequency
// dependent attenuation: |10*log10(alpha_min/alpha_max)|.
double attenuation_bound_db(double alpha_min_per_m, double alpha_max_per_m);

// Stationary launch power of P / (P_ase + eta*P^3) for fixed eta:
// closed form of the optimum satisfies P_ase = 2*eta*P^3.
double optimal_launch_power(double p_ase_w, double eta_per_w2);

// Golden-section search of the channel SNR over total launch power; eta_of_p
// maps P_tot -> eta of the evaluated channel (may re-run the model, capturing
// the power dependence introduced by the Raman tilt).
double optimal_total_power(const std::function<double(double)>& eta_of_p,
                           const std::function<double(double)>& p_ase_of_p, int channel_count,
                           double p_lo_w, double p_hi_w);

struct LinkBudget {
  struct Entry {
    double f_hz = 0.0;
    double p_launch_w = 0.0;
    double p_ase_w = 0.0;
    double eta_per_w2 = 0.0;
    double snr_db = 0.0;
    double epsilon = 0.0;  // filled by coherence sweeps, 0 otherwise
  };
  std::vector<Entry> entries;
};

// Assembles SNR per channel from an NLI result; span gain per channel is the
// inverse of that channel's span loss rho(L, f_i) (ideal gain flattening).
LinkBudget compute_link_budget(const WdmSpectrum& spectrum, const LinkSpec& link,
                               const NliResult& nli, const PowerProfile& profile);

void write_budget_csv(const std::string& path, const LinkBudget& budget);

}  // namespace isrsgn
