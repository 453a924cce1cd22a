#include "isrsgn/metrics.hpp"

#include <cmath>
#include <limits>

#include "isrsgn/csv.hpp"
#include "isrsgn/errors.hpp"
#include "isrsgn/math_util.hpp"
#include "isrsgn/units.hpp"

namespace isrsgn {

double eta_from_psd(double g_at_fi_w_per_hz, double b_ch_hz, double p_i_w) {
  if (p_i_w <= 0) throw config_error("eta_from_psd: channel power must be positive");
  return b_ch_hz * g_at_fi_w_per_hz / (p_i_w * p_i_w * p_i_w);
}

double snr_db(double p_i_w, double p_ase_w, double eta_per_w2) {
  const double noise = p_ase_w + eta_per_w2 * p_i_w * p_i_w * p_i_w;
  if (noise <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(p_i_w / noise);
}

double ase_total(double noise_figure_db, double span_gain_db, double center_frequency_abs_hz,
                 double b_ch_hz, int span_count) {
  if (span_gain_db < 0) throw config_error("ase_total: span gain must be >= 0 dB");
  if (span_count < 1) throw config_error("ase_total: span count must be >= 1");
  const double f_lin = units::db_to_linear(noise_figure_db);
  const double g_lin = units::db_to_linear(span_gain_db);
  return span_count * f_lin * phys::h_planck * center_frequency_abs_hz * (g_lin - 1.0) * b_ch_hz;
}

double coherence_factor(double eta_1, double eta_n, int span_count) {
  if (span_count < 2) throw config_error("coherence_factor: need at least 2 spans");
  if (!(eta_1 > 0) || !(eta_n > 0)) throw config_error("coherence_factor: eta must be positive");
  const double num = 10.0 * std::log10(eta_n) - 10.0 * std::log10(eta_1);
  return num / (10.0 * std::log10(static_cast<double>(span_count))) - 1.0;
}

double coherence_factor_fit(const std::vector<int>& spans, const std::vector<double>& etas) {
  if (spans.size() != etas.size() || spans.size() < 2)
    throw config_error("coherence_factor_fit: need >= 2 (n, eta) points");
  std::vector<double> x(spans.size()), y(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i] < 1 || !(etas[i] > 0)) throw config_error("coherence_factor_fit: bad point");
    x[i] = 10.0 * std::log10(static_cast<double>(spans[i]));
    y[i] = 10.0 * std::log10(etas[i]);
  }
  return fit_line(x, y).slope - 1.0;
}

double attenuation_bound_db(double alpha_min_per_m, double alpha_max_per_m) {
  if (!(alpha_min_per_m > 0) || alpha_max_per_m < alpha_min_per_m)
    throw config_error("attenuation_bound: need 0 < alpha_min <= alpha_max");
  return std::abs(10.0 * std::log10(alpha_min_per_m / alpha_max_per_m));
}

double optimal_launch_power(double p_ase_w, double eta_per_w2) {
  if (!(p_ase_w > 0) || !(eta_per_w2 > 0))
    throw config_error("optimal_launch_power: noise terms must be positive");
  return std::cbrt(p_ase_w / (2.0 * eta_per_w2));
}

double optimal_total_power(const std::function<double(double)>& eta_of_p,
                           const std::function<double(double)>& p_ase_of_p, int channel_count,
                           double p_lo_w, double p_hi_w) {
  if (channel_count < 1) throw config_error("optimal_total_power: bad channel count");
  auto snr_of = [&](double log_p) {
    const double p_tot = std::exp(log_p);
    const double p_ch = p_tot / channel_count;
    return snr_db(p_ch, p_ase_of_p(p_tot), eta_of_p(p_tot));
  };
  const double log_opt = maximize_golden(snr_of, std::log(p_lo_w), std::log(p_hi_w), 1e-5);
  return std::exp(log_opt);
}

LinkBudget compute_link_budget(const WdmSpectrum& spectrum, const LinkSpec& link,
                               const NliResult& nli, const PowerProfile& profile) {
  if (nli.channels.size() != spectrum.channels.size())
    throw config_error("compute_link_budget: spectrum / NLI channel mismatch");
  LinkBudget budget;
  budget.entries.resize(spectrum.channels.size());
  for (std::size_t i = 0; i < spectrum.channels.size(); ++i) {
    const auto& ch = spectrum.channels[i];
    LinkBudget::Entry e;
    e.f_hz = ch.center_hz;
    e.p_launch_w = ch.power_w;
    const double rho_end = profile.rho(profile.length_m, ch.center_hz);
    const double gain_db = -10.0 * std::log10(rho_end);
    e.p_ase_w = ase_total(link.noise_figure_db, gain_db,
                          spectrum.absolute_frequency(ch.center_hz), ch.bandwidth_hz,
                          nli.span_count);
    e.eta_per_w2 = nli.channels[i].eta_per_w2;
    e.snr_db = snr_db(e.p_launch_w, e.p_ase_w, e.eta_per_w2);
    budget.entries[i] = e;
  }
  return budget;
}

void write_budget_csv(const std::string& path, const LinkBudget& budget) {
  CsvTable t;
  t.header = {"f_thz", "p_launch_dbm", "p_ase_dbm", "eta_db", "snr_db", "epsilon"};
  for (const auto& e : budget.entries) {
    t.rows.push_back({format_double(e.f_hz / 1e12), format_double(units::watt_to_dbm(e.p_launch_w)),
                      format_double(units::watt_to_dbm(e.p_ase_w)),
                      format_double(10.0 * std::log10(e.eta_per_w2)), format_double(e.snr_db),
                      format_double(e.epsilon)});
  }
  write_csv(path, t);
}

}  // namespace isrsgn
