#include "isrsgn/gn_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "isrsgn/csv.hpp"
#include "isrsgn/errors.hpp"
#include "isrsgn/math_util.hpp"
#include "isrsgn/parallel.hpp"
#include "isrsgn/units.hpp"

namespace isrsgn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::IsrsAnalytical: return "isrs-analytical";
    case ModelVariant::GeneralProfile: return "general-profile";
    case ModelVariant::ConventionalGn: return "conventional-gn";
    case ModelVariant::BaselineSwappedRho: return "baseline-swapped-rho";
    case ModelVariant::BaselineEffectiveAtt: return "baseline-effective-attenuation";
  }
  return "unknown";
}

std::optional<ModelVariant> model_variant_from_string(const std::string& s) {
  if (s == "isrs-analytical") return ModelVariant::IsrsAnalytical;
  if (s == "general-profile") return ModelVariant::GeneralProfile;
  if (s == "conventional-gn") return ModelVariant::ConventionalGn;
  if (s == "baseline-swapped-rho") return ModelVariant::BaselineSwappedRho;
  if (s == "baseline-effective-attenuation") return ModelVariant::BaselineEffectiveAtt;
  return std::nullopt;
}

const ChannelNli& NliResult::at_frequency(double f_hz) const {
  const ChannelNli* best = nullptr;
  double best_d = 0.0;
  for (const auto& ch : channels) {
    const double d = std::abs(ch.f_hz - f_hz);
    if (!best || d < best_d) {
      best = &ch;
      best_d = d;
    }
  }
  if (!best) throw config_error("NliResult: no channels");
  return *best;
}

namespace {

struct Panel {
  double a, b;
  bool osc = false;     // oscillation-resolving panel (higher GL order)
  bool pa_avg = false;  // beyond the coherent cap: phased-array factor -> n
};

void push_inside(std::vector<double>& pts, double v, double lo, double hi) {
  if (v > lo && v < hi) pts.push_back(v);
}

void finalize_points(std::vector<double>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::abs(a - b) <= 1e-3; }),
            pts.end());
}

// Geometric clustering toward nu = 0 where the phase-matched ridge lives.
void add_ridge_ladder(std::vector<double>& pts, double lo, double hi, double nu_floor,
                      double ratio) {
  if (!(lo < 0.0 && hi > 0.0)) return;
  const double s = std::max(-lo, hi);
  for (double p = s / ratio; p > nu_floor; p /= ratio) {
    push_inside(pts, -p, lo, hi);
    push_inside(pts, p, lo, hi);
  }
  push_inside(pts, -nu_floor, lo, hi);
  push_inside(pts, nu_floor, lo, hi);
}

struct EvalContext {
  const WdmSpectrum* spectrum = nullptr;
  const FiberSpec* fiber = nullptr;
  const SpanKernel* kernel = nullptr;
  const QuadratureOptions* opts = nullptr;
  std::vector<double> psd_breaks;
  double band_lo = 0.0, band_hi = 0.0;
  double beta2 = 0.0, beta3 = 0.0;
  double span_len = 0.0;
  int n_spans = 1;
  double prefactor = 0.0;  // pol_factor * gamma^2
};

// Inner integral over nu2 = f2 - f at fixed nu1 = f1 - f.
double inner_integral(const EvalContext& ctx, double f, double nu1, int level,
                      long long& kernel_evals) {
  const double lo = std::max(ctx.band_lo - f, ctx.band_lo - f - nu1);
  const double hi = std::min(ctx.band_hi - f, ctx.band_hi - f - nu1);
  if (hi <= lo) return 0.0;
  const QuadratureOptions& q = *ctx.opts;

  std::vector<double> pts{lo, hi};
  for (double b : ctx.psd_breaks) {
    push_inside(pts, b - f, lo, hi);        // f2 chart
    push_inside(pts, b - f - nu1, lo, hi);  // f1+f2-f chart
  }
  add_ridge_ladder(pts, lo, hi, q.nu_floor_hz, q.ladder_ratio);
  if (ctx.beta3 != 0.0) {
    const double nu2_star = 0.5 * (-ctx.beta2 / (kPi * ctx.beta3) - 2.0 * f - nu1);
    push_inside(pts, nu2_star, lo, hi);
  }
  finalize_points(pts);

  // Phase-slope bound d|kappa L|/d nu2 over the range, used to size the
  // oscillation zone and its panels.
  const double numax = std::max(std::abs(lo), std::abs(hi));
  const double slope = 4.0 * kPi * kPi * std::abs(nu1) *
                       (std::abs(ctx.beta2) +
                        kPi * std::abs(ctx.beta3) * (std::abs(2.0 * f + nu1) + 2.0 * numax)) *
                       ctx.span_len;
  const bool multi = ctx.n_spans > 1 && !q.pa_force_one;
  const double phi_cap = multi ? q.phi_cap_pa : q.phi_cap_base;
  const int k_eff = multi ? (ctx.n_spans - 1) : 1;
  const double zone = slope > 0.0 ? phi_cap / slope : std::numeric_limits<double>::infinity();
  const double h_osc = slope > 0.0
                           ? q.osc_periods_per_panel * 2.0 * kPi / (slope * k_eff)
                           : std::numeric_limits<double>::infinity();

  std::vector<Panel> panels;
  panels.reserve(pts.size() * 2);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i], b = pts[i + 1];
    auto emit = [&](double x0, double x1, bool in_zone) {
      if (x1 <= x0) return;
      if (in_zone && x1 - x0 > h_osc) {
        const int pieces = std::min<long long>(
            100000, static_cast<long long>(std::ceil((x1 - x0) / h_osc)));
        for (int p = 0; p < pieces; ++p)
          panels.push_back({x0 + (x1 - x0) * p / pieces, x0 + (x1 - x0) * (p + 1) / pieces, true,
                            false});
      } else {
        panels.push_back({x0, x1, in_zone, !in_zone && multi});
      }
    };
    const double z0 = std::max(a, -zone), z1 = std::min(b, zone);
    if (z1 <= z0) {
      emit(a, b, false);
    } else {
      emit(a, z0, false);
      emit(z0, z1, true);
      emit(z1, b, false);
    }
  }

  const int split = 1 << level;
  double acc = 0.0;
  for (const auto& panel : panels) {
    for (int s = 0; s < split; ++s) {
      const double a = panel.a + (panel.b - panel.a) * s / split;
      const double b = panel.a + (panel.b - panel.a) * (s + 1) / split;
      const double mid = 0.5 * (a + b);
      const double g2 = ctx.spectrum->psd(f + mid);
      if (g2 == 0.0) continue;
      const double g3 = ctx.spectrum->psd(f + nu1 + mid);
      if (g3 == 0.0) continue;
      const auto& gl = gauss_legendre(panel.osc ? q.gl_order_osc : q.gl_order);
      const double half = 0.5 * (b - a);
      double sum = 0.0;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double nu2 = mid + half * gl.nodes[i];
        const double kappa =
            phase_mismatch_rate(f + nu1, f + nu2, f, ctx.beta2, ctx.beta3);
        const double lk2 = std::norm(ctx.kernel->lk_triplet(f + nu1, f + nu2, f, kappa));
        ++kernel_evals;
        double pa = 1.0;
        if (multi)
          pa = panel.pa_avg ? static_cast<double>(ctx.n_spans)
                            : phased_array_factor(kappa * ctx.span_len, ctx.n_spans);
        else if (ctx.n_spans > 1)
          pa = 1.0;  // pa_force_one consistency hook
        sum += gl.weights[i] * lk2 * pa;
      }
      acc += half * g2 * g3 * sum;
    }
  }
  return acc;
}

double outer_integral(const EvalContext& ctx, double f, int level, long long& kernel_evals) {
  const double lo = ctx.band_lo - f, hi = ctx.band_hi - f;
  const QuadratureOptions& q = *ctx.opts;
  std::vector<double> pts{lo, hi};
  for (double b : ctx.psd_breaks) push_inside(pts, b - f, lo, hi);
  add_ridge_ladder(pts, lo, hi, q.nu_floor_hz, q.ladder_ratio);
  finalize_points(pts);

  const int split = 1 << level;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    for (int s = 0; s < split; ++s) {
      const double a = pts[i] + (pts[i + 1] - pts[i]) * s / split;
      const double b = pts[i] + (pts[i + 1] - pts[i]) * (s + 1) / split;
      const double mid = 0.5 * (a + b);
      const double g1 = ctx.spectrum->psd(f + mid);
      if (g1 == 0.0) continue;
      const auto& gl = gauss_legendre(q.gl_order);
      const double half = 0.5 * (b - a);
      double sum = 0.0;
      for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const double nu1 = mid + half * gl.nodes[k];
        sum += gl.weights[k] * inner_integral(ctx, f, nu1, level, kernel_evals);
      }
      acc += half * g1 * sum;
    }
  }
  return ctx.prefactor * acc;
}

struct RefinedValue {
  double value = 0.0;
  double rel_err = 0.0;
  int level = 0;
};

RefinedValue refine_psd(const EvalContext& ctx, double f, long long& kernel_evals) {
  const QuadratureOptions& q = *ctx.opts;
  double prev = outer_integral(ctx, f, 0, kernel_evals);
  for (int level = 1; level <= q.max_refine_levels; ++level) {
    const double cur = outer_integral(ctx, f, level, kernel_evals);
    const double scale = std::max(std::abs(cur), 1e-300);
    const double rel = std::abs(cur - prev) / scale;
    if (rel <= q.rel_tol) return {cur, rel, level};
    prev = cur;
  }
  throw numerics_error("nli quadrature did not converge: last estimates " +
                       std::to_string(prev) + " at f = " + std::to_string(f / 1e12) + " THz");
}

double pol_prefactor(Polarization p, double gamma) {
  const double g2 = gamma * gamma;
  return p == Polarization::Dual ? (16.0 / 27.0) * g2 : 2.0 * g2;
}

}  // namespace

double effective_attenuation(const PowerProfile& profile, const FiberSpec& fiber, double f_hz) {
  auto kern = SpanKernel::make(profile, fiber);
  const double path = kern.profile_path_integral(f_hz);
  const double length = profile.length_m > 0 ? profile.length_m : fiber.length_m;
  if (!(path > 0.0) || path >= length)
    throw numerics_error("effective_attenuation: path integral does not bracket a root");
  return find_root(
      [&](double a) { return effective_length(a, length) - path; }, 1e-12, 10.0, 1e-14);
}

NliResult compute_nli(const WdmSpectrum& spectrum, const FiberSpec& fiber, int span_count,
                      ModelVariant variant, const QuadratureOptions& opts,
                      const PowerProfile* profile) {
  spectrum.validate();
  fiber.validate();
  if (span_count < 1) throw config_error("compute_nli: span count must be >= 1");

  NliResult res;
  res.variant = variant;
  res.span_count = span_count;

  PowerProfile local;
  const PowerProfile* prof = profile;
  bool swap = false;
  switch (variant) {
    case ModelVariant::ConventionalGn:
      local = flat_exponential_profile(
          fiber.alpha_band_average(spectrum.band_lo(), spectrum.band_hi()), fiber.length_m);
      prof = &local;
      break;
    case ModelVariant::IsrsAnalytical:
      local = make_analytical_profile(spectrum, fiber);
      prof = &local;
      break;
    case ModelVariant::GeneralProfile:
      if (!prof) throw config_error("compute_nli: general-profile variant needs a power profile");
      break;
    case ModelVariant::BaselineSwappedRho:
      swap = true;
      if (!prof) {
        local = make_analytical_profile(spectrum, fiber);
        prof = &local;
      }
      break;
    case ModelVariant::BaselineEffectiveAtt:
      if (!prof) {
        local = make_analytical_profile(spectrum, fiber);
        prof = &local;
      }
      break;
  }
  for (const auto& w : prof->warnings) res.warnings.push_back(w);

  PowerProfile numeric;
  if (opts.force_numeric_zeta && prof->kind == PowerProfile::Kind::FlatExponential) {
    // Same exponential decay expressed through the sampled-node integrator.
    numeric.kind = PowerProfile::Kind::AnalyticalIsrs;
    numeric.alpha = prof->alpha;
    numeric.alpha_bar = prof->alpha_bar;
    numeric.length_m = prof->length_m;
    numeric.p_tot = std::max(spectrum.total_power(), 1e-12);
    numeric.c_r = 0.0;
    numeric.f_lo = spectrum.band_lo();
    numeric.f_hi = spectrum.band_hi();
    for (const auto& ch : spectrum.channels)
      numeric.bands.push_back({ch.center_hz - 0.5 * ch.bandwidth_hz,
                               ch.center_hz + 0.5 * ch.bandwidth_hz,
                               ch.power_w / ch.bandwidth_hz});
    prof = &numeric;
  }

  const std::size_t n_ch = spectrum.channels.size();
  res.channels.resize(n_ch);

  if (fiber.gamma_per_w_m == 0.0) {
    for (std::size_t i = 0; i < n_ch; ++i) {
      res.channels[i].f_hz = spectrum.channels[i].center_hz;
      res.channels[i].g_nli_w_per_hz = 0.0;
      res.channels[i].eta_per_w2 = 0.0;
    }
    return res;
  }

  SpanKernel shared_kernel;
  const bool per_channel_kernel = variant == ModelVariant::BaselineEffectiveAtt;
  if (!per_channel_kernel)
    shared_kernel = SpanKernel::make(*prof, fiber, swap, opts.kernel_z_points,
                                     opts.zeta_calibration_tol);
  res.kernel_z_points = shared_kernel.z_points();

  EvalContext base;
  base.spectrum = &spectrum;
  base.fiber = &fiber;
  base.opts = &opts;
  base.psd_breaks = spectrum.psd_breakpoints();
  base.band_lo = spectrum.band_lo();
  base.band_hi = spectrum.band_hi();
  base.beta2 = fiber.beta2_s2_per_m;
  base.beta3 = fiber.beta3_s3_per_m;
  base.span_len = fiber.length_m;
  base.n_spans = span_count;
  base.prefactor = pol_prefactor(opts.polarization, fiber.gamma_per_w_m);

  parallel_for(n_ch, opts.jobs, [&](std::size_t i) {
    const auto& ch = spectrum.channels[i];
    EvalContext ctx = base;
    SpanKernel own;
    if (per_channel_kernel) {
      own = make_closed_exp_kernel(effective_attenuation(*prof, fiber, ch.center_hz),
                                   fiber.length_m);
      ctx.kernel = &own;
    } else {
      ctx.kernel = &shared_kernel;
    }

    long long evals = 0;
    auto eval_at = [&](double f) { return refine_psd(ctx, f, evals); };

    const bool exact = opts.eta_mode == EtaMode::ExactAll ||
                       (opts.eta_mode == EtaMode::ExactEdges && (i == 0 || i + 1 == n_ch));
    ChannelNli out;
    out.f_hz = ch.center_hz;
    if (!exact) {
      const RefinedValue rv = eval_at(ch.center_hz);
      out.g_nli_w_per_hz = rv.value;
      out.quad_rel_err = rv.rel_err;
      out.refine_level = rv.level;
    } else {
      const auto& gl = gauss_legendre(5);
      const double half = 0.5 * ch.bandwidth_hz;
      double integral = 0.0, err = 0.0;
      int lvl = 0;
      for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const RefinedValue rv = eval_at(ch.center_hz + half * gl.nodes[k]);
        integral += gl.weights[k] * half * rv.value;
        err = std::max(err, rv.rel_err);
        lvl = std::max(lvl, rv.level);
      }
      out.g_nli_w_per_hz = integral / ch.bandwidth_hz;  // band-average PSD
      out.quad_rel_err = err;
      out.refine_level = lvl;
    }
    if (ch.power_w > 0.0) {
      out.eta_per_w2 =
          ch.bandwidth_hz * out.g_nli_w_per_hz / (ch.power_w * ch.power_w * ch.power_w);
    }
    out.kernel_evals = evals;
    res.channels[i] = out;
  });

  return res;
}

namespace {
double single_frequency(const WdmSpectrum& spectrum, const FiberSpec& fiber, int span_count,
                        ModelVariant variant, const PowerProfile* profile, double f_hz,
                        double rel_tol) {
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  // Evaluate only the requested frequency: temporary one-channel view keeps
  // the full spectrum for mixing but reports a single result.
  spectrum.validate();
  fiber.validate();
  if (fiber.gamma_per_w_m == 0.0) return 0.0;

  PowerProfile local;
  const PowerProfile* prof = profile;
  bool swap = false;
  switch (variant) {
    case ModelVariant::ConventionalGn:
      local = flat_exponential_profile(
          fiber.alpha_band_average(spectrum.band_lo(), spectrum.band_hi()), fiber.length_m);
      prof = &local;
      break;
    case ModelVariant::IsrsAnalytical:
      local = make_analytical_profile(spectrum, fiber);
      prof = &local;
      break;
    case ModelVariant::BaselineSwappedRho:
      swap = true;
      if (!prof) {
        local = make_analytical_profile(spectrum, fiber);
        prof = &local;
      }
      break;
    case ModelVariant::GeneralProfile:
      if (!prof) throw config_error("nli_psd_general: profile required");
      break;
    case ModelVariant::BaselineEffectiveAtt: {
      if (!prof) {
        local = make_analytical_profile(spectrum, fiber);
        prof = &local;
      }
      break;
    }
  }

  SpanKernel kern;
  if (variant == ModelVariant::BaselineEffectiveAtt) {
    kern = make_closed_exp_kernel(effective_attenuation(*prof, fiber, f_hz), fiber.length_m);
  } else {
    kern = SpanKernel::make(*prof, fiber, swap, opts.kernel_z_points, opts.zeta_calibration_tol);
  }

  EvalContext ctx;
  ctx.spectrum = &spectrum;
  ctx.fiber = &fiber;
  ctx.kernel = &kern;
  ctx.opts = &opts;
  ctx.psd_breaks = spectrum.psd_breakpoints();
  ctx.band_lo = spectrum.band_lo();
  ctx.band_hi = spectrum.band_hi();
  ctx.beta2 = fiber.beta2_s2_per_m;
  ctx.beta3 = fiber.beta3_s3_per_m;
  ctx.span_len = fiber.length_m;
  ctx.n_spans = span_count;
  ctx.prefactor = pol_prefactor(opts.polarization, fiber.gamma_per_w_m);

  long long evals = 0;
  return refine_psd(ctx, f_hz, evals).value;
}
}  // namespace

double nli_psd_general(const WdmSpectrum& spectrum, const FiberSpec& fiber,
                       const PowerProfile& profile, int span_count, double f_hz, double rel_tol) {
  return single_frequency(spectrum, fiber, span_count, ModelVariant::GeneralProfile, &profile,
                          f_hz, rel_tol);
}

double nli_psd_isrs(const WdmSpectrum& spectrum, const FiberSpec& fiber, int span_count,
                    double f_hz, double rel_tol) {
  return single_frequency(spectrum, fiber, span_count, ModelVariant::IsrsAnalytical, nullptr,
                          f_hz, rel_tol);
}

double nli_psd_conventional(const WdmSpectrum& spectrum, const FiberSpec& fiber, int span_count,
                            double f_hz, double rel_tol) {
  return single_frequency(spectrum, fiber, span_count, ModelVariant::ConventionalGn, nullptr,
                          f_hz, rel_tol);
}

double nli_psd_baseline_swapped(const WdmSpectrum& spectrum, const FiberSpec& fiber,
                                const PowerProfile& profile, int span_count, double f_hz,
                                double rel_tol) {
  return single_frequency(spectrum, fiber, span_count, ModelVariant::BaselineSwappedRho, &profile,
                          f_hz, rel_tol);
}

double nli_psd_baseline_effatt(const WdmSpectrum& spectrum, const FiberSpec& fiber, int span_count,
                               double f_hz, double rel_tol) {
  return single_frequency(spectrum, fiber, span_count, ModelVariant::BaselineEffectiveAtt, nullptr,
                          f_hz, rel_tol);
}

McEstimate nli_psd_monte_carlo(const WdmSpectrum& spectrum, const FiberSpec& fiber,
                               const PowerProfile& profile, int span_count, double f_hz,
                               long long samples, unsigned long long seed,
                               const QuadratureOptions& opts) {
  spectrum.validate();
  fiber.validate();
  if (samples <= 1) throw config_error("nli_psd_monte_carlo: need > 1 samples");
  auto kern = SpanKernel::make(profile, fiber, false, opts.kernel_z_points,
                               opts.zeta_calibration_tol);
  const double lo = spectrum.band_lo(), hi = spectrum.band_hi();
  const double area = (hi - lo) * (hi - lo);
  const double pref = pol_prefactor(opts.polarization, fiber.gamma_per_w_m);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(lo, hi);
  double sum = 0.0, sum2 = 0.0;
  for (long long s = 0; s < samples; ++s) {
    const double f1 = uni(rng), f2 = uni(rng);
    const double g1 = spectrum.psd(f1);
    const double g2 = spectrum.psd(f2);
    const double g3 = spectrum.psd(f1 + f2 - f_hz);
    double val = 0.0;
    if (g1 > 0 && g2 > 0 && g3 > 0) {
      const double kappa =
          phase_mismatch_rate(f1, f2, f_hz, fiber.beta2_s2_per_m, fiber.beta3_s3_per_m);
      const double lk2 = std::norm(kern.lk_triplet(f1, f2, f_hz, kappa));
      const double pa = phased_array_factor(kappa * fiber.length_m, span_count);
      val = g1 * g2 * g3 * lk2 * pa;
    }
    sum += val;
    sum2 += val * val;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, sum2 / samples - mean * mean);
  McEstimate est;
  est.mean = pref * area * mean;
  est.std_error = pref * area * std::sqrt(var / samples);
  est.samples = samples;
  return est;
}

void write_nli_csv(const std::string& path, const NliResult& result,
                   const std::vector<double>& snr_db) {
  CsvTable t;
  t.header = {"f_thz", "g_nli_w_per_hz", "eta_db", "snr_db", "model_variant", "n_spans",
              "quadrature_error_estimate"};
  for (std::size_t i = 0; i < result.channels.size(); ++i) {
    const auto& ch = result.channels[i];
    const double eta_db =
        ch.eta_per_w2 > 0 ? 10.0 * std::log10(ch.eta_per_w2) : -std::numeric_limits<double>::infinity();
    t.rows.push_back({format_double(ch.f_hz / 1e12), format_double(ch.g_nli_w_per_hz),
                      format_double(eta_db),
                      snr_db.empty() ? "" : format_double(snr_db[i]), to_string(result.variant),
                      std::to_string(result.span_count), format_double(ch.quad_rel_err)});
  }
  write_csv(path, t);
}

}  // namespace isrsgn
