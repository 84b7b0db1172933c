#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace quasyn::numerics {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Composite 20-point Gauss-Legendre with panel doubling until two successive
/// refinements agree to rel_tol. The integrand must be finite on [a, b];
/// integrable endpoint singularities are expected to be removed by a
/// substitution before calling this.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-10,
                          int max_doublings = 18) {
  using rule = boost::math::quadrature::gauss<double, 20>;
  double previous = rule::integrate(f, a, b);
  std::size_t panels = 2;
  for (int pass = 0; pass < max_doublings; ++pass, panels *= 2) {
    const double h = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double lo = a + static_cast<double>(p) * h;
      total += rule::integrate(f, lo, lo + h);
    }
    const double scale = std::max(std::abs(total), std::numeric_limits<double>::min());
    if (std::abs(total - previous) <= rel_tol * scale) return total;
    previous = total;
  }
  throw QuadratureError("integrate_adaptive: no convergence to requested tolerance");
}

/// Root of f on [lo, hi] given a sign change (endpoints with f == 0 are
/// returned directly). TOMS 748 bracketing, refined to full double precision.
template <class F>
double find_root(F&& f, double lo, double hi) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument("find_root: endpoints do not bracket a sign change");
  }
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits);
  std::uintmax_t max_iter = 128;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
  return 0.5 * (r.first + r.second);
}

struct LinearFit {
  double slope;
  double intercept;
};

/// Ordinary least squares y = slope*x + intercept, centered for stability.
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need two equally sized samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    sxx += dx * dx;
    sxy += dx * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace quasyn::numerics
