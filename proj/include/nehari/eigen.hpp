#pragma once

#include <cmath>
#include <stdexcept>

#include "nehari/descent.hpp"
#include "nehari/energy.hpp"
#include "nehari/mesh.hpp"

namespace nehari {

/// First eigenpair of the discrete r-Laplacian. phi is nonnegative with
/// ||phi||_r = 1, and lambda1 is its Rayleigh quotient.
struct EigenPair {
  double r = 0.0;
  double lambda1 = 0.0;
  Field phi;
  int iterations = 0;
  double residual = 0.0;  // relative nodal residual of the eigenequation
};

struct InvalidExponent : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

/// Gradient of ||u'||_r^r in the nodal values, optionally Huber-regularized.
inline Field stiffness_gradient(const Field& u, double r, double cutoff) {
  const double h = u.mesh.h;
  Field out(u.mesh);
  double flux_prev = signed_pow_huber(u.at(0) / h, r, cutoff);
  for (int i = 0; i < u.size(); ++i) {
    const double flux_next =
        signed_pow_huber((u.at(i + 1) - u.at(i)) / h, r, cutoff);
    out[i] = r * (flux_prev - flux_next);
    flux_prev = flux_next;
  }
  return out;
}

inline double rayleigh(const Field& u, double r) {
  return grad_norm_pow(u, r) / lp_norm_pow(u, r);
}

}  // namespace detail

/// Minimizes the Rayleigh quotient ||u'||_r^r / ||u||_r^r by preconditioned
/// projected gradient descent with Armijo backtracking, renormalizing
/// ||u||_r = 1 each step. The iterate starts from (and stays near) the
/// positive bump, selecting the positive first eigenfunction.
inline EigenPair solve_first_eigen(const Mesh& mesh, double r,
                                   const SolverOptions& opts = {},
                                   Field seed = Field{}) {
  if (!(r > 1.0)) throw InvalidExponent("solve_first_eigen: requires r > 1");

  Field u = seed.size() == mesh.n ? std::move(seed) : bump(mesh);
  for (double& v : u.values) v = std::fabs(v);
  u *= 1.0 / lp_norm(u, r);

  double quotient = detail::rayleigh(u, r);
  double step = 1.0;
  int it = 0;
  int stagnant = 0;
  bool converged = false;
  for (; it < opts.max_iters; ++it) {
    const double K = grad_norm_pow(u, r);
    const double M = lp_norm_pow(u, r);  // == 1 after normalization
    const double R = K / M;

    Field grad = detail::stiffness_gradient(u, r, opts.huber_cutoff);
    double grad_scale = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      const double mass = r * mesh.h * signed_pow(u[i], r);
      grad_scale += grad[i] * grad[i];
      grad[i] = (grad[i] - R * mass) / M;
    }
    grad_scale = std::sqrt(grad_scale) + kZeroFloor;

    double gnorm = 0.0;
    for (int i = 0; i < u.size(); ++i) gnorm += grad[i] * grad[i];
    gnorm = std::sqrt(gnorm);
    if (gnorm <= opts.tol_grad * grad_scale) {
      converged = true;
      break;
    }

    const Field dir = detail::laplace_solve(grad);
    const double slope = -dot(grad, dir);

    auto value_at = [&](double s) {
      Field trial = u;
      for (int i = 0; i < u.size(); ++i) trial[i] -= s * dir[i];
      return detail::rayleigh(trial, r);
    };
    const double s =
        detail::armijo_step(value_at, R, slope, std::min(4.0 * step, 1.0), opts);
    if (s == 0.0) {
      // no admissible step: the quotient cannot decrease any further
      converged = true;
      break;
    }
    step = s;
    for (int i = 0; i < u.size(); ++i) u[i] -= s * dir[i];
    if (it % 50 == 49)
      for (double& v : u.values) v = std::fabs(v);
    u *= 1.0 / lp_norm(u, r);

    const double next = detail::rayleigh(u, r);
    stagnant = std::fabs(quotient - next) <= opts.tol_rel * std::fabs(next)
                   ? stagnant + 1
                   : 0;
    quotient = next;
    if (stagnant >= 5) {
      converged = true;
      break;
    }
  }

  for (double& v : u.values) v = std::fabs(v);
  u *= 1.0 / lp_norm(u, r);
  const double lambda = detail::rayleigh(u, r);

  Field res = operator_residual(u, r, lambda);
  double rn = 0.0, scale = 0.0;
  {
    Field stiff = detail::stiffness_gradient(u, r, 0.0);
    for (int i = 0; i < u.size(); ++i) {
      rn += res[i] * res[i];
      scale += stiff[i] * stiff[i] / (r * r);
    }
  }
  const double rel_res = std::sqrt(rn) / (std::sqrt(scale) + kZeroFloor);

  if (!converged)
    throw NonConvergence("solve_first_eigen: iteration budget exhausted", u,
                         lambda);

  EigenPair out;
  out.r = r;
  out.lambda1 = lambda;
  out.phi = std::move(u);
  out.iterations = it;
  out.residual = rel_res;
  return out;
}

/// alpha_* = ||phi_q'||_p^p / ||phi_q||_p^p.
inline double compute_alpha_star(const Mesh& mesh, double p, double q,
                                 const SolverOptions& opts = {}) {
  if (!(p > q && q > 1.0))
    throw std::invalid_argument("compute_alpha_star: requires p > q > 1");
  const EigenPair eq = solve_first_eigen(mesh, q, opts);
  return grad_norm_pow(eq.phi, p) / lp_norm_pow(eq.phi, p);
}

/// beta_* = ||phi_p'||_q^q / ||phi_p||_q^q.
inline double compute_beta_star(const Mesh& mesh, double p, double q,
                                const SolverOptions& opts = {}) {
  if (!(p > q && q > 1.0))
    throw std::invalid_argument("compute_beta_star: requires p > q > 1");
  const EigenPair ep = solve_first_eigen(mesh, p, opts);
  return grad_norm_pow(ep.phi, q) / lp_norm_pow(ep.phi, q);
}

/// L2 distance of the normalized, sign-aligned eigenfunctions; a strictly
/// positive value certifies discrete linear independence.
inline double linear_independence_check(const Field& phi_p,
                                        const Field& phi_q) {
  return normalized_l2_distance(phi_p, phi_q);
}

/// Precomputed eigen-structure shared by the parameter-plane solvers.
struct EigenContext {
  Mesh mesh;
  double p, q;
  EigenPair pair_p, pair_q;
  double lambda1_p, lambda1_q;
  double alpha_star, beta_star;

  EigenContext(const Mesh& m, double p_, double q_,
               const SolverOptions& opts = {})
      : mesh(m), p(p_), q(q_) {
    if (!(p > q && q > 1.0))
      throw std::invalid_argument("EigenContext: requires p > q > 1");
    pair_p = solve_first_eigen(mesh, p, opts);
    pair_q = solve_first_eigen(mesh, q, opts);
    lambda1_p = pair_p.lambda1;
    lambda1_q = pair_q.lambda1;
    alpha_star = grad_norm_pow(pair_q.phi, p) / lp_norm_pow(pair_q.phi, p);
    beta_star = grad_norm_pow(pair_p.phi, q) / lp_norm_pow(pair_p.phi, q);
  }
};

}  // namespace nehari
