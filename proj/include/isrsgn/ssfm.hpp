#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "isrsgn/raman.hpp"
#include "isrsgn/spectrum.hpp"

namespace isrsgn {

// Split-step Manakov oracle. The ISRS power transfer is emulated: every
// linear half-step applies the frequency-resolved amplitude ratio
// sqrt(rho(z1,f)/rho(z0,f)) of the selected profile, so the accumulated gain
// reproduces the commanded profile exactly for every step size.
struct SimConfig {
  WdmSpectrum spectrum;
  FiberSpec fiber;
  int span_count = 1;
  double noise_figure_db = 5.0;

  int symbols_log2 = 13;
  int samples_per_symbol = 0;  // 0 = smallest power of two with Fs >= 3x occupied band
  double step_m = 10.0;
  double rolloff = 1e-4;       // RRC roll-off fraction
  std::uint64_t seed = 1;

  enum class IsrsEmulation { AnalyticalProfile, OdeProfile, Off };
  IsrsEmulation isrs = IsrsEmulation::AnalyticalProfile;
  bool ase = false;

  enum class Transmitter { RrcGaussian, RrcConstantModulus, Comb };
  Transmitter transmitter = Transmitter::RrcGaussian;

  double memory_budget_bytes = 4.0e9;
};

struct SimChannelResult {
  double f_hz = 0.0;
  double snr_db = 0.0;
  double eta_per_w2 = 0.0;
  double p_rx_w = 0.0;               // span-end power before the amplifier
  double residual_dispersion_s2 = 0.0;
  std::complex<double> ls_scale[2] = {{0.0, 0.0}, {0.0, 0.0}};  // per-pol LS normalization
};

struct SimResult {
  std::vector<SimChannelResult> channels;
  std::uint64_t seed = 0;
  long long steps_per_span = 0;
  double sample_rate_hz = 0.0;
  std::size_t fft_size = 0;
  std::vector<std::string> warnings;

  // Comb-transmitter extras: complex field at the tone grid (per polarization)
  // plus the transmitted phasors, for ensemble statistics across seeds.
  std::vector<int> comb_tone_indices;                  // frequency = index * f0
  double comb_f0_hz = 0.0;
  std::vector<std::complex<double>> comb_tx[2], comb_rx[2];
};

SimResult ssfm_simulate(const SimConfig& config);

// Batch driver: every (power, span-count) pair re-runs the simulator with the
// same seed so symbol realizations are shared across sweep points.
struct EtaSweepPoint {
  double p_tot_w = 0.0;
  int span_count = 1;
  SimResult result;
};
std::vector<EtaSweepPoint> estimate_eta_sweep(const SimConfig& base,
                                              const std::vector<double>& total_powers_w,
                                              const std::vector<int>& span_counts, int jobs = 0);

void write_sim_csv(const std::string& path, const SimResult& result);

}  // namespace isrsgn
