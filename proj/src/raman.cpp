#include "isrsgn/raman.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isrsgn/csv.hpp"
#include "isrsgn/errors.hpp"
#include "isrsgn/units.hpp"

namespace isrsgn {

namespace {
constexpr double kLinearRamanLimitHz = 15.0000001e12;
constexpr double kDbPerNeper = 10.0 / 2.302585092994046;  // 10/ln10
}  // namespace

double effective_length(double alpha_per_m, double z_m) {
  if (alpha_per_m <= 0) throw config_error("effective_length: alpha must be positive");
  if (z_m < 0) throw config_error("effective_length: z must be non-negative");
  // Stable for small alpha*z as well.
  return -std::expm1(-alpha_per_m * z_m) / alpha_per_m;
}

double edge_power_transfer_db(double p_tot_w, double c_r, double l_eff_m, double b_hz) {
  if (p_tot_w < 0 || c_r < 0 || l_eff_m < 0 || b_hz < 0)
    throw config_error("edge_power_transfer: arguments must be non-negative");
  return kDbPerNeper * p_tot_w * c_r * l_eff_m * b_hz;
}

double PowerProfile::tilt_x(double z_m) const {
  return p_tot * c_r * effective_length(alpha, z_m);
}

double PowerProfile::psd_exp_moment(double x) const {
  // sum_i g_i * (e^{-x lo_i} - e^{-x hi_i}) / x, series expansion near x = 0.
  double d = 0.0;
  for (const auto& b : bands) {
    const double w = b.hi - b.lo;
    if (std::abs(x) * std::max(std::abs(b.lo), std::abs(b.hi)) < 1e-7) {
      const double m1 = 0.5 * (b.lo + b.hi);
      const double m2 = (b.lo * b.lo + b.lo * b.hi + b.hi * b.hi) / 3.0;
      d += b.psd * w * (1.0 - x * m1 + 0.5 * x * x * m2);
    } else {
      d += b.psd * (std::exp(-x * b.lo) - std::exp(-x * b.hi)) / x;
    }
  }
  return d;
}

bool PowerProfile::covers(double f_hz) const {
  switch (kind) {
    case Kind::FlatExponential:
    case Kind::AnalyticalIsrs:
      return true;
    case Kind::SampledGrid:
      return f_hz >= f_grid.front() - 1e-3 && f_hz <= f_grid.back() + 1e-3;
  }
  return false;
}

double PowerProfile::rho(double z_m, double f_hz) const {
  switch (kind) {
    case Kind::FlatExponential:
      return std::exp(-alpha * z_m);
    case Kind::AnalyticalIsrs: {
      const double x = tilt_x(z_m);
      return p_tot * std::exp(-alpha * z_m - x * f_hz) / psd_exp_moment(x);
    }
    case Kind::SampledGrid: {
      const double zq = std::clamp(z_m, z_grid.front(), z_grid.back());
      const double fq = std::clamp(f_hz, f_grid.front(), f_grid.back());
      auto zi = std::upper_bound(z_grid.begin(), z_grid.end(), zq);
      std::size_t i1 = std::min<std::size_t>(
          std::max<std::size_t>(1, static_cast<std::size_t>(zi - z_grid.begin())),
          z_grid.size() - 1);
      auto fi = std::upper_bound(f_grid.begin(), f_grid.end(), fq);
      std::size_t j1 = std::min<std::size_t>(
          std::max<std::size_t>(1, static_cast<std::size_t>(fi - f_grid.begin())),
          f_grid.size() - 1);
      const std::size_t i0 = i1 - 1, j0 = j1 - 1;
      const double tz = (z_grid[i1] == z_grid[i0])
                            ? 0.0
                            : (zq - z_grid[i0]) / (z_grid[i1] - z_grid[i0]);
      const double tf = (f_grid[j1] == f_grid[j0])
                            ? 0.0
                            : (fq - f_grid[j0]) / (f_grid[j1] - f_grid[j0]);
      const std::size_t nf = f_grid.size();
      const double r00 = rho_zf[i0 * nf + j0], r01 = rho_zf[i0 * nf + j1];
      const double r10 = rho_zf[i1 * nf + j0], r11 = rho_zf[i1 * nf + j1];
      return (1 - tz) * ((1 - tf) * r00 + tf * r01) + tz * ((1 - tf) * r10 + tf * r11);
    }
  }
  return 0.0;
}

PowerProfile flat_exponential_profile(double alpha_per_m, double length_m) {
  PowerProfile p;
  p.kind = PowerProfile::Kind::FlatExponential;
  p.alpha = alpha_per_m;
  p.alpha_bar = alpha_per_m;
  p.length_m = length_m;
  return p;
}

PowerProfile flat_exponential_profile(const FiberSpec& fiber) {
  return flat_exponential_profile(fiber.alpha_per_m, fiber.length_m);
}

PowerProfile make_analytical_profile(const WdmSpectrum& spectrum, const FiberSpec& fiber) {
  spectrum.validate();
  fiber.validate();
  if (spectrum.total_bandwidth() > kLinearRamanLimitHz)
    throw model_domain_error(
        "analytical ISRS profile: optical bandwidth exceeds the linear Raman-gain "
        "window (~15 THz); use the ODE path");
  PowerProfile p;
  p.kind = PowerProfile::Kind::AnalyticalIsrs;
  p.alpha = fiber.alpha_band_average(spectrum.band_lo(), spectrum.band_hi());
  p.alpha_bar = p.alpha;
  p.length_m = fiber.length_m;
  p.p_tot = spectrum.total_power();
  p.c_r = fiber.raman_slope_per_w_m_hz;
  p.f_lo = spectrum.band_lo();
  p.f_hi = spectrum.band_hi();
  for (const auto& ch : spectrum.channels)
    p.bands.push_back({ch.center_hz - 0.5 * ch.bandwidth_hz, ch.center_hz + 0.5 * ch.bandwidth_hz,
                       ch.power_w / ch.bandwidth_hz});
  if (fiber.raman_gain_curve && !fiber.raman_gain_curve->empty() && fiber.raman_slope_per_w_m_hz > 0)
    p.warnings.push_back(
        "both raman_curve and C_r supplied: the analytical profile uses C_r, the ODE path "
        "uses the curve");
  return p;
}

double analytical_profile(const WdmSpectrum& spectrum, const FiberSpec& fiber, double z_m,
                          double f_hz) {
  return make_analytical_profile(spectrum, fiber).rho(z_m, f_hz);
}

namespace {

struct OdeSystem {
  std::vector<double> f_abs;     // absolute channel frequencies, ascending in relative f
  std::vector<double> alpha;     // per-channel attenuation
  std::vector<double> coupling;  // coupling[i*n+j] = g(|f_i - f_j|)
  PhotonFactor photon = PhotonFactor::AsPrinted;

  void rhs(const std::vector<double>& p, std::vector<double>& dp) const {
    const std::size_t n = f_abs.size();
    for (std::size_t i = 0; i < n; ++i) {
      double acc = -alpha[i] * p[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double g = coupling[i * n + j];
        if (g == 0.0) continue;
        if (f_abs[j] > f_abs[i]) {
          acc += g * p[j] * p[i];  // gain from higher-frequency channels
        } else {
          double w = 1.0;
          if (photon == PhotonFactor::AsPrinted)
            w = f_abs[j] / f_abs[i];
          else if (photon == PhotonFactor::Inverted)
            w = f_abs[i] / f_abs[j];
          acc -= w * g * p[j] * p[i];  // depletion toward lower frequencies
        }
      }
      dp[i] = acc;
    }
  }
};

void rk4_march(const OdeSystem& sys, std::vector<double>& p, double z0, double z1, double h_max) {
  const std::size_t n = p.size();
  const int steps = std::max(1, static_cast<int>(std::ceil((z1 - z0) / h_max)));
  const double h = (z1 - z0) / steps;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (int s = 0; s < steps; ++s) {
    sys.rhs(p, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * h * k1[i];
    sys.rhs(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * h * k2[i];
    sys.rhs(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = p[i] + h * k3[i];
    sys.rhs(tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

std::vector<std::vector<double>> integrate_grid(const OdeSystem& sys,
                                                const std::vector<double>& p0,
                                                const std::vector<double>& z_grid, double h) {
  std::vector<std::vector<double>> out;
  out.reserve(z_grid.size());
  std::vector<double> p = p0;
  out.push_back(p);
  for (std::size_t k = 1; k < z_grid.size(); ++k) {
    rk4_march(sys, p, z_grid[k - 1], z_grid[k], h);
    for (double v : p)
      if (!(v > 0.0) || !std::isfinite(v))
        throw numerics_error("solve_raman_ode: non-positive channel power at z = " +
                             std::to_string(z_grid[k]) + " m (step " + std::to_string(h) + " m)");
    out.push_back(p);
  }
  return out;
}

}  // namespace

PowerProfile solve_raman_ode(const WdmSpectrum& spectrum, const FiberSpec& fiber,
                             const std::vector<double>& z_grid, const RamanOdeOptions& opts) {
  spectrum.validate();
  fiber.validate();
  if (z_grid.size() < 2 || z_grid.front() != 0.0)
    throw config_error("solve_raman_ode: z grid must start at 0 and contain >= 2 points");
  for (std::size_t i = 1; i < z_grid.size(); ++i)
    if (z_grid[i] <= z_grid[i - 1]) throw config_error("solve_raman_ode: z grid must be increasing");
  if (std::abs(z_grid.back() - fiber.length_m) > 1e-6)
    throw config_error("solve_raman_ode: z grid must end at the fiber length");

  const std::size_t n = spectrum.channels.size();
  OdeSystem sys;
  sys.photon = opts.photon_factor;
  sys.f_abs.resize(n);
  sys.alpha.resize(n);
  std::vector<double> p0(n);
  for (std::size_t i = 0; i < n; ++i) {
    sys.f_abs[i] = spectrum.absolute_frequency(spectrum.channels[i].center_hz);
    sys.alpha[i] = fiber.alpha_at(spectrum.channels[i].center_hz);
    p0[i] = spectrum.channels[i].power_w;
  }
  sys.coupling.resize(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j)
        sys.coupling[i * n + j] = fiber.raman_coupling(std::abs(sys.f_abs[i] - sys.f_abs[j]));

  double h = opts.step_m;
  auto sol = integrate_grid(sys, p0, z_grid, h);
  for (int halving = 0;; ++halving) {
    if (halving >= opts.max_halvings)
      throw numerics_error("solve_raman_ode: step halving did not reach rel_tol " +
                           std::to_string(opts.rel_tol) + " within " +
                           std::to_string(opts.max_halvings) + " halvings (last step " +
                           std::to_string(h) + " m)");
    const double h2 = 0.5 * h;
    auto sol2 = integrate_grid(sys, p0, z_grid, h2);
    double max_rel = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = sol.back()[i], b = sol2.back()[i];
      max_rel = std::max(max_rel, std::abs(a - b) / b);
    }
    sol = std::move(sol2);
    h = h2;
    if (max_rel < opts.rel_tol) break;
  }

  PowerProfile prof;
  prof.kind = PowerProfile::Kind::SampledGrid;
  prof.alpha = fiber.alpha_band_average(spectrum.band_lo(), spectrum.band_hi());
  prof.alpha_bar = prof.alpha;
  prof.length_m = fiber.length_m;
  prof.z_grid = z_grid;
  prof.f_grid.resize(n);
  for (std::size_t i = 0; i < n; ++i) prof.f_grid[i] = spectrum.channels[i].center_hz;
  prof.rho_zf.resize(z_grid.size() * n);
  for (std::size_t k = 0; k < z_grid.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) prof.rho_zf[k * n + i] = sol[k][i] / p0[i];
  if (fiber.raman_gain_curve && !fiber.raman_gain_curve->empty() && fiber.raman_slope_per_w_m_hz > 0)
    prof.warnings.push_back(
        "both raman_curve and C_r supplied: the ODE used the curve, the analytical profile "
        "uses C_r");
  return prof;
}

double isrs_net_gain_db(const PowerProfile& profile, double z_m, double f_hz) {
  const double r = profile.rho(z_m, f_hz);
  return 10.0 * std::log10(r) + units::atten_per_m_to_db_per_km(profile.alpha_bar) * z_m / 1e3;
}

PowerProfile resample_profile(const PowerProfile& profile, const WdmSpectrum& spectrum,
                              int z_points) {
  PowerProfile out;
  out.kind = PowerProfile::Kind::SampledGrid;
  out.alpha = profile.alpha;
  out.alpha_bar = profile.alpha_bar;
  out.length_m = profile.length_m;
  out.z_grid.resize(static_cast<std::size_t>(z_points));
  for (int k = 0; k < z_points; ++k)
    out.z_grid[static_cast<std::size_t>(k)] = profile.length_m * k / (z_points - 1);
  if (profile.kind == PowerProfile::Kind::SampledGrid) {
    out.f_grid = profile.f_grid;
  } else {
    out.f_grid.resize(spectrum.channels.size());
    for (std::size_t i = 0; i < spectrum.channels.size(); ++i)
      out.f_grid[i] = spectrum.channels[i].center_hz;
  }
  out.rho_zf.resize(out.z_grid.size() * out.f_grid.size());
  for (std::size_t k = 0; k < out.z_grid.size(); ++k)
    for (std::size_t j = 0; j < out.f_grid.size(); ++j)
      out.rho_zf[k * out.f_grid.size() + j] = profile.rho(out.z_grid[k], out.f_grid[j]);
  return out;
}

void write_profile_csv(const std::string& path, const PowerProfile& profile,
                       const WdmSpectrum& spectrum, const std::vector<double>& z_samples) {
  CsvTable t;
  t.header = {"z_km", "f_thz", "rho", "net_gain_db"};
  for (double z : z_samples) {
    for (const auto& ch : spectrum.channels) {
      const double r = profile.rho(z, ch.center_hz);
      t.rows.push_back({format_double(z / 1e3), format_double(ch.center_hz / 1e12),
                        format_double(r), format_double(isrs_net_gain_db(profile, z, ch.center_hz))});
    }
  }
  write_csv(path, t);
}

}  // namespace isrsgn
