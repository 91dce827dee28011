#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace nehari {

inline constexpr double kPi = 3.14159265358979323846;

/// Half-period constant pi_r of the generalized sine sin_r.
inline double pi_r(double r) {
  if (!(r > 1.0)) throw std::invalid_argument("pi_r: requires r > 1");
  return 2.0 * kPi / (r * std::sin(kPi / r));
}

/// First Dirichlet eigenvalue of the 1D r-Laplacian on an interval of
/// length L, from the generalized-trigonometric closed form.
inline double exact_lambda1(double r, double L) {
  if (!(r > 1.0)) throw std::invalid_argument("exact_lambda1: requires r > 1");
  if (!(L > 0.0)) throw std::invalid_argument("exact_lambda1: requires L > 0");
  return (r - 1.0) * std::pow(pi_r(r) / L, r);
}

namespace detail {

/// Integrates -(|u'|^{r-2}u')' = lambda |u|^{r-2}u from u(0)=0, u'(0)=1
/// and returns the location of the first zero of u, or +inf if no zero
/// occurs before x_max. The flux w = |u'|^{r-2}u' is the state variable,
/// so no negative powers of u' appear for r < 2.
inline double first_zero(double r, double lambda, double x_max, int steps) {
  const double rp = r / (r - 1.0);  // conjugate exponent
  auto du = [&](double w) {
    // u' = |w|^{rp-2} w
    return (w == 0.0) ? 0.0 : std::pow(std::fabs(w), rp - 2.0) * w;
  };
  auto dw = [&](double u) {
    return (u == 0.0) ? 0.0 : -lambda * std::pow(std::fabs(u), r - 2.0) * u;
  };
  const double dx = x_max / steps;
  double x = 0.0, u = 0.0, w = 1.0;
  for (int i = 0; i < steps; ++i) {
    const double k1u = du(w), k1w = dw(u);
    const double k2u = du(w + 0.5 * dx * k1w), k2w = dw(u + 0.5 * dx * k1u);
    const double k3u = du(w + 0.5 * dx * k2w), k3w = dw(u + 0.5 * dx * k2u);
    const double k4u = du(w + dx * k3w), k4w = dw(u + dx * k3u);
    const double un = u + dx / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    const double wn = w + dx / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    const double xn = x + dx;
    if (i > 0 && un <= 0.0) {
      // linear interpolation of the crossing
      const double t = u / (u - un);
      return x + t * dx;
    }
    u = un;
    w = wn;
    x = xn;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Shooting oracle for the first 1D r-Laplacian eigenvalue: bisects
/// lambda until the first zero of the shooting solution lands at L.
inline double shoot_lambda1(double r, double L, double tol = 1e-10,
                            int steps = 20000, int max_bisect = 60) {
  if (!(r > 1.0)) throw std::invalid_argument("shoot_lambda1: requires r > 1");
  if (!(L > 0.0)) throw std::invalid_argument("shoot_lambda1: requires L > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("shoot_lambda1: requires tol > 0");

  // First zero position decreases in lambda. Bracket it around L.
  double lo = 1e-6, hi = 1.0;
  const double span = 4.0 * L;
  while (detail::first_zero(r, hi, span, steps) > L) {
    hi *= 4.0;
    if (hi > 1e12)
      throw std::runtime_error("shoot_lambda1: no upper bracket found");
  }
  while (detail::first_zero(r, lo, span, steps) < L) {
    lo *= 0.25;
    if (lo < 1e-18)
      throw std::runtime_error("shoot_lambda1: no lower bracket found");
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < max_bisect; ++it) {
    mid = 0.5 * (lo + hi);
    const double x1 = detail::first_zero(r, mid, span, steps);
    if (std::fabs(x1 - L) < tol) break;
    if (x1 > L)
      lo = mid;
    else
      hi = mid;
  }
  return mid;
}

/// Profile of the shooting solution at the given eigenvalue, sampled at
/// m interior nodes of (0,L). Used to cross-check discrete eigenfunctions.
inline std::vector<double> shoot_profile(double r, double L, double lambda,
                                         int m, int steps = 20000) {
  const double rp = r / (r - 1.0);
  auto du = [&](double w) {
    return (w == 0.0) ? 0.0 : std::pow(std::fabs(w), rp - 2.0) * w;
  };
  auto dw = [&](double u) {
    return (u == 0.0) ? 0.0 : -lambda * std::pow(std::fabs(u), r - 2.0) * u;
  };
  std::vector<double> out(m, 0.0);
  const double dx = L / steps;
  double u = 0.0, w = 1.0;
  int next = 0;
  for (int i = 0; i < steps && next < m; ++i) {
    const double k1u = du(w), k1w = dw(u);
    const double k2u = du(w + 0.5 * dx * k1w), k2w = dw(u + 0.5 * dx * k1u);
    const double k3u = du(w + 0.5 * dx * k2w), k3w = dw(u + 0.5 * dx * k2u);
    const double k4u = du(w + dx * k3w), k4w = dw(u + dx * k3u);
    const double un = u + dx / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    const double x0 = i * dx, x1 = x0 + dx;
    while (next < m) {
      const double xn = L * (next + 1) / (m + 1);
      if (xn > x1) break;
      const double t = (xn - x0) / dx;
      out[next++] = (1.0 - t) * u + t * un;
    }
    u = un;
    w = w + dx / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
  }
  return out;
}

}  // namespace nehari
