#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "nehari/mesh.hpp"

namespace nehari {

/// Shared knobs for the iterative minimizers.
struct SolverOptions {
  double tol_rel = 1e-10;
  double tol_grad = 1e-8;
  int max_iters = 200000;
  double huber_cutoff = 1e-10;       // flux regularization during descent only
  double divergence_threshold = -1e6;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
};

/// Thrown when an iteration budget runs out; carries the best iterate.
struct NonConvergence : std::runtime_error {
  Field best;
  double best_value;
  NonConvergence(const char* what, Field b, double v)
      : std::runtime_error(what), best(std::move(b)), best_value(v) {}
};

namespace detail {

/// Solves (1/h) tridiag(-1, 2, -1) x = g, the linear Dirichlet stiffness
/// system on the mesh. Used as a descent preconditioner: it restores
/// mesh-independent conditioning for all the gradient flows here.
inline Field laplace_solve(const Field& g) {
  const int n = g.size();
  const double h = g.mesh.h;
  std::vector<double> c(n), d(n);
  Field x(g.mesh);
  // Thomas algorithm with a(i)=-1/h, b(i)=2/h
  double denom = 2.0 / h;
  c[0] = (-1.0 / h) / denom;
  d[0] = g[0] / denom;
  for (int i = 1; i < n; ++i) {
    denom = 2.0 / h - (-1.0 / h) * c[i - 1];
    c[i] = (-1.0 / h) / denom;
    d[i] = (g[i] - (-1.0 / h) * d[i - 1]) / denom;
  }
  x[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

/// |t|^{r-2} t with a Huber-style cutoff near 0, for descent assembly when
/// r < 2 (the unregularized value blows up as t -> 0).
inline double signed_pow_huber(double t, double r, double cutoff) {
  const double a = std::fabs(t);
  if (r < 2.0 && a < cutoff) return std::pow(cutoff, r - 2.0) * t;
  if (t == 0.0) return 0.0;
  return std::pow(a, r - 2.0) * t;
}

/// Backtracking line search on a scale-free objective. Returns the accepted
/// step (0 if none found down to step_min).
inline double armijo_step(const std::function<double(double)>& value_at,
                          double f0, double slope, double step0,
                          const SolverOptions& opts, double step_min = 1e-14) {
  double s = step0;
  while (s > step_min) {
    const double f = value_at(s);
    if (std::isfinite(f) && f <= f0 + opts.armijo_c * s * slope) return s;
    s *= opts.armijo_shrink;
  }
  return 0.0;
}

}  // namespace detail

}  // namespace nehari
