#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isrsgn/gn_engine.hpp"
#include "isrsgn/raman.hpp"
#include "isrsgn/spectrum.hpp"
#include "isrsgn/ssfm.hpp"

namespace isrsgn {

// Engineering-unit view of one system configuration, mirroring the text file:
//
//   [fiber]       alpha_db_per_km, dispersion_ps_nm_km, dispersion_slope,
//                 gamma_per_w_km, raman_slope_per_w_km_thz, length_km,
//                 optional raman_curve = thz:per_w_km, ... pairs,
//                 optional alpha_curve = thz:db_per_km, ... pairs,
//                 optional reference_wavelength_nm (default 1550)
//   [spectrum]    channel_count, symbol_rate_gbd, spacing_ghz,
//                 launch_power_dbm_total | launch_power_dbm_per_channel,
//                 optional center_frequency_thz (default 193.4)
//   [link]        spans, noise_figure_db
//   [model]       variant, quad_rel_tol, zeta_rel_tol, optional photon_factor,
//                 eta_mode
//   [simulation]  symbols_log2, step_m, seed, optional samples_per_symbol,
//                 rolloff_percent, isrs_emulation, ase, transmitter
struct SystemConfig {
  // fiber
  double alpha_db_per_km = 0.2;
  double dispersion_ps_nm_km = 17.0;
  double dispersion_slope = 0.0;  // ps/nm^2/km
  double gamma_per_w_km = 1.2;
  double raman_slope_per_w_km_thz = 0.0;
  double length_km = 100.0;
  double reference_wavelength_nm = 1550.0;
  std::vector<std::pair<double, double>> raman_curve;  // (THz, 1/W/km)
  std::vector<std::pair<double, double>> alpha_curve;  // (THz, dB/km)

  // spectrum
  int channel_count = 1;
  double symbol_rate_gbd = 0.0;
  double spacing_ghz = 0.0;
  std::optional<double> launch_power_dbm_total;
  std::vector<double> launch_power_dbm_per_channel;
  double center_frequency_thz = 193.4;

  // link
  int spans = 1;
  double noise_figure_db = 5.0;

  // model
  std::string variant = "isrs-analytical";
  double quad_rel_tol = 1e-3;
  double zeta_rel_tol = 1e-8;
  std::string photon_factor = "as-printed";
  std::string eta_mode = "locally-flat";

  // simulation
  int symbols_log2 = 13;
  double step_m = 10.0;
  std::uint64_t seed = 1;
  int samples_per_symbol = 0;
  double rolloff_percent = 0.01;
  std::string isrs_emulation = "analytical-profile";
  bool ase = false;
  std::string transmitter = "rrc-gaussian";

  FiberSpec fiber() const;
  WdmSpectrum spectrum() const;
  LinkSpec link() const;
  ModelVariant model_variant() const;
  QuadratureOptions quadrature() const;
  PhotonFactor photon() const;
  SimConfig simulation() const;

  std::string serialize() const;  // canonical text form (manifest embedding)
};

// Parses the sectioned key = value format; errors carry the line number.
SystemConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
SystemConfig load_config(const std::string& path);

}  // namespace isrsgn
