#include "isrsgn/span_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isrsgn/errors.hpp"

namespace isrsgn {

namespace {
constexpr double kPi = 3.14159265358979323846;

// exp(u) for |u| <= ~0.05, relative error < 1e-9.
inline double exp_small(double u) {
  return 1.0 + u * (1.0 + 0.5 * u * (1.0 + u / 3.0 * (1.0 + 0.25 * u * (1.0 + 0.2 * u))));
}

// ∫ over one segment of S_a e^{-mu (z - z_a)} e^{j kappa z} dz with endpoint
// values S_a, S_b = S_a e^{-mu dz} and phase factors P_a, P_b.
inline std::complex<double> segment_integral(double s_a, double s_b, double mu,
                                             std::complex<double> p_a, std::complex<double> p_b,
                                             double kappa, double dz) {
  if ((std::abs(mu) + std::abs(kappa)) * dz < 1e-6) {
    const std::complex<double> x(-mu * dz, kappa * dz);
    return s_a * p_a * dz * (1.0 + x * (0.5 + x / 6.0));
  }
  const double inv = 1.0 / (mu * mu + kappa * kappa);
  return (s_a * p_a - s_b * p_b) * std::complex<double>(mu * inv, kappa * inv);
}
}  // namespace

double phase_mismatch_rate(double f1, double f2, double f, double beta2, double beta3) {
  return -4.0 * kPi * kPi * (f1 - f) * (f2 - f) * (beta2 + kPi * beta3 * (f1 + f2));
}

double phased_array_factor(double phi_rad, int span_count) {
  if (span_count < 1) throw config_error("phased_array_factor: span count must be >= 1");
  if (span_count == 1) return 1.0;
  const double s = std::sin(0.5 * phi_rad);
  if (std::abs(s) < 1e-9) return static_cast<double>(span_count) * span_count;
  const double r = std::sin(0.5 * span_count * phi_rad) / s;
  return r * r;
}

SpanKernel make_closed_exp_kernel(double alpha_per_m, double length_m) {
  SpanKernel k;
  k.kind_ = SpanKernel::Kind::ClosedExp;
  k.alpha_ = alpha_per_m;
  k.length_ = length_m;
  return k;
}

std::complex<double> SpanKernel::lk_closed(double kappa) const {
  const std::complex<double> a(alpha_, -kappa);
  if (std::abs(a) * length_ < 1e-8) return {length_, 0.0};
  return (1.0 - std::exp(-a * length_)) / a;
}

SpanKernel SpanKernel::make(const PowerProfile& profile, const FiberSpec& fiber, bool swap_rho,
                            int z_points, double calibration_tol) {
  SpanKernel k;
  k.swap_ = swap_rho;
  k.length_ = profile.length_m > 0 ? profile.length_m : fiber.length_m;
  switch (profile.kind) {
    case PowerProfile::Kind::FlatExponential:
      k.kind_ = Kind::ClosedExp;
      k.alpha_ = profile.alpha;
      return k;
    case PowerProfile::Kind::AnalyticalIsrs: {
      k.kind_ = Kind::AnalyticIsrs;
      auto build = [&](int n) {
        SpanKernel kk = k;
        kk.dz_ = kk.length_ / n;
        kk.z_.resize(static_cast<std::size_t>(n) + 1);
        kk.x_.resize(kk.z_.size());
        kk.env0_.resize(kk.z_.size());
        for (int i = 0; i <= n; ++i) {
          const double z = kk.length_ * i / n;
          const double x = profile.tilt_x(z);
          kk.z_[i] = z;
          kk.x_[i] = x;
          kk.env0_[i] = profile.p_tot * std::exp(-profile.alpha * z) / profile.psd_exp_moment(x);
        }
        kk.mu0_.resize(static_cast<std::size_t>(n));
        kk.dx_.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          kk.mu0_[i] = std::log(kk.env0_[i] / kk.env0_[i + 1]) / kk.dz_;
          kk.dx_[i] = kk.x_[i + 1] - kk.x_[i];
        }
        return kk;
      };
      if (z_points > 0) return build(std::max(16, z_points));
      const double wmax = std::max(std::abs(profile.f_lo), std::abs(profile.f_hi));
      const double probes_w[] = {wmax, -wmax, 0.31 * wmax};
      const double probes_kappa[] = {0.0, profile.alpha, 10.0 * profile.alpha, 300.0 / k.length_};
      int n = 128;
      SpanKernel cur = build(n);
      while (n < 2048) {
        SpanKernel fine = build(2 * n);
        double worst = 0.0;
        for (double w : probes_w)
          for (double kp : probes_kappa) {
            const double a = cur.lk_sq(w, kp);
            const double b = fine.lk_sq(w, kp);
            if (b > 0) worst = std::max(worst, std::abs(a - b) / b);
          }
        if (worst < calibration_tol) return cur;
        cur = std::move(fine);
        n *= 2;
      }
      return cur;
    }
    case PowerProfile::Kind::SampledGrid: {
      k.kind_ = Kind::Sampled;
      if (profile.z_grid.size() < 3)
        throw config_error("SpanKernel: sampled profile needs >= 3 z nodes");
      auto owned = std::make_shared<const PowerProfile>(profile);
      k.owned_profile_ = owned;
      k.profile_ = owned.get();
      k.z_ = owned->z_grid;
      return k;
    }
  }
  throw numerics_error("SpanKernel: unknown profile kind");
}

std::complex<double> SpanKernel::lk_analytic(double w, double kappa, int stride) const {
  const std::size_t n = z_.size() - 1;
  const double dz = dz_ * stride;
  const std::complex<double> rot(std::cos(kappa * dz), std::sin(kappa * dz));
  std::complex<double> p_a(1.0, 0.0);
  double g_a = 1.0;  // e^{-x_k w}, small-argument recurrence (no exp calls)
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t i = 0; i < n; i += static_cast<std::size_t>(stride)) {
    const std::size_t j = i + static_cast<std::size_t>(stride);
    const double dxw = (x_[j] - x_[i]) * w;
    const double g_b = g_a * exp_small(-dxw);
    const double s_a = env0_[i] * g_a;
    const double s_b = env0_[j] * g_b;
    const std::complex<double> p_b = p_a * rot;
    const double mu = (stride == 1) ? (mu0_[i] + dx_[i] * w / dz_)
                                    : (std::log(env0_[i] / env0_[j]) / dz + dxw / dz);
    acc += segment_integral(s_a, s_b, mu, p_a, p_b, kappa, dz);
    g_a = g_b;
    p_a = p_b;
  }
  return acc;
}

std::complex<double> SpanKernel::lk(double w, double kappa) const {
  switch (kind_) {
    case Kind::ClosedExp:
      return lk_closed(kappa);
    case Kind::AnalyticIsrs: {
      const std::complex<double> fine = lk_analytic(w, kappa, 1);
      const std::complex<double> coarse = lk_analytic(w, kappa, 2);
      return (4.0 * fine - coarse) / 3.0;
    }
    case Kind::Sampled:
      throw numerics_error("SpanKernel::lk: sampled profiles need lk_triplet");
  }
  return {};
}

double SpanKernel::lk_sq(double w, double kappa) const { return std::norm(lk(w, kappa)); }

std::complex<double> SpanKernel::lk_pass(const std::vector<double>& env, double kappa,
                                         int stride) const {
  const std::size_t n = z_.size() - 1;
  std::complex<double> sum(0.0, 0.0);
  for (std::size_t i = 0; i + static_cast<std::size_t>(stride) <= n;
       i += static_cast<std::size_t>(stride)) {
    const std::size_t j = i + static_cast<std::size_t>(stride);
    const double dz = z_[j] - z_[i];
    const double mu = std::log(env[i] / env[j]) / dz;
    const std::complex<double> p_a(std::cos(kappa * z_[i]), std::sin(kappa * z_[i]));
    const std::complex<double> p_b(std::cos(kappa * z_[j]), std::sin(kappa * z_[j]));
    sum += segment_integral(env[i], env[j], mu, p_a, p_b, kappa, dz);
  }
  return sum;
}

std::complex<double> SpanKernel::lk_fixed(const std::vector<double>& env, double kappa) const {
  const std::size_t n = z_.size() - 1;
  if (n % 2 == 0 && n >= 4) return (4.0 * lk_pass(env, kappa, 1) - lk_pass(env, kappa, 2)) / 3.0;
  return lk_pass(env, kappa, 1);
}

std::complex<double> SpanKernel::lk_triplet(double f1, double f2, double f, double kappa) const {
  const double w = f1 + f2 - f;
  if (kind_ != Kind::Sampled) return lk(swap_ ? f : w, kappa);
  for (double q : {f1, f2, f, w})
    if (!profile_->covers(q))
      throw model_domain_error("span mixing: frequency outside the profile domain");
  const double num3 = swap_ ? f : w;
  const double den = swap_ ? w : f;
  std::vector<double> env(z_.size());
  for (std::size_t i = 0; i < z_.size(); ++i) {
    const double z = z_[i];
    env[i] = std::sqrt(profile_->rho(z, f1) * profile_->rho(z, f2) * profile_->rho(z, num3) /
                       profile_->rho(z, den));
  }
  return lk_fixed(env, kappa);
}

std::vector<double> SpanKernel::envelope_at(double f_fixed) const {
  if (kind_ == Kind::ClosedExp)
    throw numerics_error("SpanKernel::envelope_at: closed-form kernel has no node grid");
  std::vector<double> env(z_.size());
  if (kind_ == Kind::AnalyticIsrs) {
    for (std::size_t i = 0; i < z_.size(); ++i) env[i] = env0_[i] * std::exp(-x_[i] * f_fixed);
  } else {
    for (std::size_t i = 0; i < z_.size(); ++i) env[i] = profile_->rho(z_[i], f_fixed);
  }
  return env;
}

double SpanKernel::profile_path_integral(double f) const {
  if (kind_ == Kind::ClosedExp) return effective_length(alpha_, length_);
  return lk_fixed(envelope_at(f), 0.0).real();
}

double span_mixing_integral(double f1, double f2, double f, const PowerProfile& profile,
                            const FiberSpec& fiber, double zeta_rel_tol) {
  const double kappa = phase_mismatch_rate(f1, f2, f, fiber.beta2_s2_per_m, fiber.beta3_s3_per_m);
  if (profile.kind == PowerProfile::Kind::FlatExponential) {
    auto k = make_closed_exp_kernel(profile.alpha, profile.length_m);
    return std::norm(k.lk(0.0, kappa));
  }
  if (profile.kind == PowerProfile::Kind::SampledGrid) {
    auto kern = SpanKernel::make(profile, fiber, false);
    return std::norm(kern.lk_triplet(f1, f2, f, kappa));
  }
  double prev = -1.0;
  for (int n = 128; n <= 16384; n *= 2) {
    auto kern = SpanKernel::make(profile, fiber, false, n);
    const double cur = kern.lk_sq(f1 + f2 - f, kappa);
    if (prev >= 0.0 && std::abs(cur - prev) / std::max(cur, 1e-300) < zeta_rel_tol) return cur;
    prev = cur;
  }
  throw numerics_error("span_mixing_integral: node doubling did not converge to tolerance " +
                       std::to_string(zeta_rel_tol) + " (last estimates " + std::to_string(prev) + ")");
}

}  // namespace isrsgn
