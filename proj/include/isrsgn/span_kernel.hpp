#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "isrsgn/raman.hpp"
#include "isrsgn/spectrum.hpp"

namespace isrsgn {

// Phase-mismatch rate of the mixing triplet (f1, f2, f): the phase of the
// distance integrand is phi = kappa * zeta with
//   kappa = -4*pi^2 * (f1-f) * (f2-f) * [beta2 + pi*beta3*(f1+f2)].
// The bracket groups the dispersion terms so both carry 1/(m*Hz^2); all
// frequencies are relative to the beta-expansion reference.
double phase_mismatch_rate(double f1, double f2, double f, double beta2, double beta3);

// Multi-span coherent build-up factor sin^2(n*phi/2)/sin^2(phi/2); evaluates
// the removable singularities at phi = 2*pi*m as n^2.
double phased_array_factor(double phi_rad, int span_count);

// One-span link factor LK = ∫_0^L env(z) e^{j kappa z} dz with
//   env = sqrt(rho(z,f1) rho(z,f2) rho(z,f1+f2-f) / rho(z,f)).
//
// The oscillation is integrated exactly against a piecewise-exponential
// interpolant of the envelope (node values exact, log-linear in between), so
// cost is independent of |kappa| and the result is exact for flat-exponential
// profiles. A Richardson pass over the half-resolution node set cancels the
// leading O(h^2) interpolation error.
class SpanKernel {
 public:
  // swap_rho exchanges rho(z,f1+f2-f) and rho(z,f) inside the envelope.
  // z_points = 0 picks the node count by doubling probes until the probed
  // |LK|^2 settles within calibration_tol.
  static SpanKernel make(const PowerProfile& profile, const FiberSpec& fiber,
                         bool swap_rho = false, int z_points = 0,
                         double calibration_tol = 1e-6);

  // Single-argument fast path (closed-form / analytical-ISRS kinds): w is the
  // frequency whose profile exponent enters the envelope, f1+f2-f normally
  // and f when swapped.
  std::complex<double> lk(double w, double kappa) const;
  double lk_sq(double w, double kappa) const;

  // Full triplet evaluation, valid for every kind (required for sampled
  // profiles whose envelope depends on all four frequencies).
  std::complex<double> lk_triplet(double f1, double f2, double f, double kappa) const;

  // Fixed-envelope path: env(z) = rho(z, f_fixed) tabulated on the z nodes.
  // The swapped baseline precomputes this once per evaluated channel.
  std::vector<double> envelope_at(double f_fixed) const;
  std::complex<double> lk_fixed(const std::vector<double>& env, double kappa) const;

  // ∫_0^L rho(z, f) dz of the underlying profile.
  double profile_path_integral(double f) const;

  bool closed_form() const { return kind_ == Kind::ClosedExp; }
  bool single_argument() const { return kind_ != Kind::Sampled; }
  bool swapped() const { return swap_; }
  int z_points() const { return static_cast<int>(z_.empty() ? 0 : z_.size() - 1); }
  double span_length() const { return length_; }

 private:
  enum class Kind { ClosedExp, AnalyticIsrs, Sampled };

  Kind kind_ = Kind::ClosedExp;
  bool swap_ = false;
  double length_ = 0.0;
  double alpha_ = 0.0;  // ClosedExp decay rate

  // AnalyticIsrs precomputation on uniform z nodes.
  std::vector<double> z_;     // nodes, size N+1
  std::vector<double> x_;     // tilt coefficient x(z_k)
  std::vector<double> env0_;  // P_tot e^{-alpha z_k} / D(x_k)
  std::vector<double> mu0_;   // ln(env0_k / env0_{k+1}) / dz
  std::vector<double> dx_;    // x_{k+1} - x_k
  double dz_ = 0.0;

  const PowerProfile* profile_ = nullptr;
  std::shared_ptr<const PowerProfile> owned_profile_;

  std::complex<double> lk_analytic(double w, double kappa, int stride) const;
  std::complex<double> lk_closed(double kappa) const;
  std::complex<double> lk_pass(const std::vector<double>& env, double kappa, int stride) const;
  friend SpanKernel make_closed_exp_kernel(double alpha, double length);
};

// Conventional-GN kernel for a plain exponential decay (also used by the
// effective-attenuation baseline with a per-channel rate).
SpanKernel make_closed_exp_kernel(double alpha_per_m, double length_m);

// |LK|^2 for one triplet, refined by node doubling with Richardson
// extrapolation until the relative change drops below zeta_rel_tol.
double span_mixing_integral(double f1, double f2, double f, const PowerProfile& profile,
                            const FiberSpec& fiber, double zeta_rel_tol = 1e-8);

}  // namespace isrsgn
