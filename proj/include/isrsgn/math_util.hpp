#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace isrsgn {

// Gauss-Legendre nodes/weights on [-1, 1]; cached per order, thread-safe after first use.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int order);

// Least-squares line fit y = a + b*x; returns {a, b}.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Bracketed scalar root find (bisection with secant acceleration).
// Requires f(lo) and f(hi) of opposite sign.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double x_rel_tol = 1e-14, int max_iter = 200);

// Golden-section maximizer for a unimodal function on [lo, hi].
double maximize_golden(const std::function<double(double)>& f, double lo, double hi,
                       double x_rel_tol = 1e-7);

}  // namespace isrsgn
