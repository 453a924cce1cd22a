#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isrsgn/raman.hpp"
#include "isrsgn/span_kernel.hpp"
#include "isrsgn/spectrum.hpp"

namespace isrsgn {

enum class ModelVariant {
  IsrsAnalytical,         // closed-form ISRS profile inside the mixing integral
  GeneralProfile,         // caller-supplied power profile (ODE output, etc.)
  ConventionalGn,         // frequency-flat exponential decay
  BaselineSwappedRho,     // rho(z,f1+f2-f) and rho(z,f) exchanged in the envelope
  BaselineEffectiveAtt,   // conventional GN with a per-channel matched-L_eff attenuation
};

std::string to_string(ModelVariant v);
std::optional<ModelVariant> model_variant_from_string(const std::string& s);

enum class Polarization { Dual, Single };  // 16/27 gamma^2 vs 2 gamma^2 prefactor
enum class EtaMode { LocallyFlat, ExactEdges, ExactAll };

struct QuadratureOptions {
  double rel_tol = 1e-3;           // refinement target on each channel's NLI PSD
  double zeta_calibration_tol = 1e-6;  // kernel node-count calibration
  int kernel_z_points = 0;         // 0 = calibrate
  int max_refine_levels = 4;
  double nu_floor_hz = 1e3;        // half-width of the central strip around the ridges
  double ladder_ratio = 4.0;       // geometric refinement toward the ridges
  int gl_order = 6;                // nodes per smooth panel
  int gl_order_osc = 8;            // nodes per oscillation panel
  double osc_periods_per_panel = 1.0;
  double phi_cap_base = 100.0;     // |kappa|L below which the link-factor ripple is resolved
  double phi_cap_pa = 300.0;       // |kappa|L below which the phased-array factor is exact
  bool force_numeric_zeta = false; // run flat envelopes through the sampled-node integrator
  bool pa_force_one = false;       // consistency hook: phased-array factor pinned to 1
  EtaMode eta_mode = EtaMode::LocallyFlat;
  Polarization polarization = Polarization::Dual;
  int jobs = 0;
};

struct ChannelNli {
  double f_hz = 0.0;
  double g_nli_w_per_hz = 0.0;
  double eta_per_w2 = 0.0;
  double quad_rel_err = 0.0;  // |last - previous| / last over the refinement ladder
  int refine_level = 0;
  long long kernel_evals = 0;
};

struct NliResult {
  ModelVariant variant = ModelVariant::ConventionalGn;
  int span_count = 1;
  int kernel_z_points = 0;
  std::vector<ChannelNli> channels;
  std::vector<std::string> warnings;

  const ChannelNli& at_frequency(double f_hz) const;
};

// NLI PSD and eta for every channel of the spectrum after n identical spans.
// `profile` is required for GeneralProfile, optional for BaselineSwappedRho
// (defaults to the closed-form ISRS profile) and ignored otherwise.
NliResult compute_nli(const WdmSpectrum& spectrum, const FiberSpec& fiber, int span_count,
                      ModelVariant variant, const QuadratureOptions& opts = {},
                      const PowerProfile* profile = nullptr);

// Single-frequency operations.
double nli_psd_general(const WdmSpectrum& spectrum, const FiberSpec& fiber,
                       const PowerProfile& profile, int span_count, double f_hz,
                       double rel_tol = 1e-3);
double nli_psd_isrs(const WdmSpectrum& spectrum, const FiberSpec& fiber, int span_count,
                    double f_hz, double rel_tol = 1e-3);
double nli_psd_conventional(const WdmSpectrum& spectrum, const FiberSpec& fiber, int span_count,
                            double f_hz, double rel_tol = 1e-3);
double nli_psd_baseline_swapped(const WdmSpectrum& spectrum, const FiberSpec& fiber,
                                const PowerProfile& profile, int span_count, double f_hz,
                                double rel_tol = 1e-3);
double nli_psd_baseline_effatt(const WdmSpectrum& spectrum, const FiberSpec& fiber, int span_count,
                               double f_hz, double rel_tol = 1e-3);

// Matched-effective-length attenuation used by the effective-attenuation
// baseline: solves (1 - e^{-a L})/a = ∫_0^L rho(z, f) dz.
double effective_attenuation(const PowerProfile& profile, const FiberSpec& fiber, double f_hz);

// Plain Monte-Carlo evaluation of the same integrand (uniform over the band
// square); unbiased cross-check for the panel quadrature.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long samples = 0;
};
McEstimate nli_psd_monte_carlo(const WdmSpectrum& spectrum, const FiberSpec& fiber,
                               const PowerProfile& profile, int span_count, double f_hz,
                               long long samples, unsigned long long seed,
                               const QuadratureOptions& opts = {});

void write_nli_csv(const std::string& path, const NliResult& result,
                   const std::vector<double>& snr_db /* empty or per channel */);

}  // namespace isrsgn
