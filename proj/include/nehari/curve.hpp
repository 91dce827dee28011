#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "nehari/descent.hpp"
#include "nehari/eigen.hpp"
#include "nehari/energy.hpp"
#include "nehari/mesh.hpp"

namespace nehari {

/// One sample of the threshold curve beta_*(alpha): the constrained
/// infimum of the q-Rayleigh quotient over { H_alpha <= 0 }.
struct CurveSample {
  double alpha = 0.0;
  double beta_star_alpha = 0.0;
  Field minimizer;
  double constraint_value = 0.0;  // H_alpha at the minimizer
  double kkt_residual = -1.0;     // filled by verify_kkt, -1 if not checked
  bool converged = false;
};

struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Gradient of ||u||_r^r.
inline Field mass_gradient(const Field& u, double r) {
  Field out(u.mesh);
  for (int i = 0; i < u.size(); ++i)
    out[i] = r * u.mesh.h * signed_pow(u[i], r);
  return out;
}

}  // namespace detail

/// Minimizes R_q(u) subject to H_alpha(u) <= 0 by an escalating exterior
/// penalty on the scale-free violation H_alpha(u)/||u'||_p^p, iterates
/// renormalized to ||u||_q = 1. Seeded with phi_q when admissible, else
/// with an admissible convex combination of phi_q and phi_p.
inline CurveSample beta_star_curve(const EigenContext& ctx, double alpha,
                                   const SolverOptions& opts = {}) {
  const Mesh& mesh = ctx.mesh;
  const double p = ctx.p, q = ctx.q;
  const double band = 1e-9 * (std::fabs(ctx.lambda1_p) + 1.0);
  if (alpha < ctx.lambda1_p - band)
    throw Infeasible("beta_star_curve: requires alpha >= lambda1(p)");
  const double a = std::max(alpha, ctx.lambda1_p);

  auto H = [&](const Field& u) {
    return grad_norm_pow(u, p) - a * lp_norm_pow(u, p);
  };

  // Seed: phi_q if admissible, else blend toward phi_p until H <= 0.
  Field u = ctx.pair_q.phi;
  if (H(u) > 0.0) {
    Field phip = ctx.pair_p.phi;
    phip *= 1.0 / lp_norm(phip, q);
    Field phiq = u;
    phiq *= 1.0 / lp_norm(phiq, q);
    bool found = false;
    for (int k = 1; k <= 60; ++k) {
      const double s = static_cast<double>(k) / 60.0;
      Field blend(mesh);
      for (int i = 0; i < mesh.n; ++i)
        blend[i] = (1.0 - s) * phiq[i] + s * phip[i];
      if (H(blend) <= 0.0) {
        u = blend;
        found = true;
        break;
      }
    }
    if (!found) u = ctx.pair_p.phi;  // H(phi_p) <= 0 for alpha >= lambda1(p)
  }
  u *= 1.0 / lp_norm(u, q);

  auto objective = [&](const Field& v, double mu) {
    const double Kq = grad_norm_pow(v, q), Mq = lp_norm_pow(v, q);
    const double Kp = grad_norm_pow(v, p);
    const double c = std::max(0.0, (Kp - a * lp_norm_pow(v, p)) / Kp);
    return Kq / Mq + mu * c * c;
  };

  bool converged = true;
  for (double mu = 1.0; mu <= 1e8 + 1.0; mu *= 10.0) {
    double step = 1.0;
    int stagnant = 0;
    double f = objective(u, mu);
    for (int it = 0; it < 4000; ++it) {
      const double Kq = grad_norm_pow(u, q), Mq = lp_norm_pow(u, q);
      const double Kp = grad_norm_pow(u, p), Mp = lp_norm_pow(u, p);
      const double Rq = Kq / Mq;
      const double c = (Kp - a * Mp) / Kp;

      Field grad = detail::stiffness_gradient(u, q, opts.huber_cutoff);
      const Field mq = detail::mass_gradient(u, q);
      for (int i = 0; i < u.size(); ++i)
        grad[i] = (grad[i] - Rq * mq[i]) / Mq;
      if (c > 0.0) {
        const Field kp = detail::stiffness_gradient(u, p, opts.huber_cutoff);
        const Field mp = detail::mass_gradient(u, p);
        // d/du [ (Kp - a Mp)/Kp ] = ((kp - a mp) Kp - (Kp - a Mp) kp)/Kp^2
        for (int i = 0; i < u.size(); ++i) {
          const double dc =
              ((kp[i] - a * mp[i]) * Kp - (Kp - a * Mp) * kp[i]) / (Kp * Kp);
          grad[i] += 2.0 * mu * c * dc;
        }
      }

      const Field dir = detail::laplace_solve(grad);
      const double slope = -dot(grad, dir);
      auto value_at = [&](double s) {
        Field trial = u;
        for (int i = 0; i < u.size(); ++i) trial[i] -= s * dir[i];
        return objective(trial, mu);
      };
      const double s = detail::armijo_step(value_at, f, slope,
                                           std::min(4.0 * step, 1.0), opts);
      if (s == 0.0) break;
      step = s;
      for (int i = 0; i < u.size(); ++i) u[i] -= s * dir[i];
      u *= 1.0 / lp_norm(u, q);
      const double fn = objective(u, mu);
      stagnant = std::fabs(f - fn) <= 1e-14 * std::fabs(fn) ? stagnant + 1 : 0;
      f = fn;
      if (stagnant >= 3) break;
      if (it == 3999) converged = false;
    }
  }

  for (double& v : u.values) v = std::fabs(v);
  u *= 1.0 / lp_norm(u, q);

  CurveSample out;
  out.alpha = alpha;
  out.minimizer = u;
  out.beta_star_alpha = grad_norm_pow(u, q) / lp_norm_pow(u, q);
  out.constraint_value = H(u);
  out.converged = converged;
  return out;
}

/// Certifies the Lagrange/KKT structure of a curve sample: fits the
/// multiplier in G'(u0) = lambda H'(u0) by least squares, rescales by
/// t = |lambda|^{1/(p-q)}, and returns the relative nodal residual of the
/// generalized eigenvalue problem at t u0. Also reports, through the
/// sample, whether the constraint is active.
struct KktReport {
  double t = 0.0;
  double multiplier = 0.0;
  double residual = 0.0;          // relative |E'(t u0)|
  double energy_at_witness = 0.0; // E(t u0), ~0 when the certificate holds
  double constraint_activity = 0.0;  // |H(u0)| / ||u0'||_p^p
  bool constraint_inactive = false;
};

inline KktReport verify_kkt(const CurveSample& sample, const EnergyParams& P) {
  const Field& u0 = sample.minimizer;
  const Field pres = h_gradient_scaled(u0, P);  // H'/p
  const Field qres = g_gradient_scaled(u0, P);  // G'/q

  // least-squares multiplier for qres = lam * pres
  const double denom = dot(pres, pres);
  const double lam = dot(qres, pres) / (denom + kZeroFloor);

  KktReport rep;
  rep.multiplier = lam;
  rep.constraint_activity =
      std::fabs(h_alpha(u0, P)) / grad_norm_pow(u0, P.p);
  rep.constraint_inactive =
      h_alpha(u0, P) < -1e-4 * grad_norm_pow(u0, P.p);

  if (lam >= 0.0) {
    // wrong multiplier sign: no rescaling exists, report a unit residual
    rep.residual = 1.0;
    return rep;
  }
  const double t = std::pow(-lam, 1.0 / (P.p - P.q));
  rep.t = t;

  Field w = u0;
  w *= t;
  const Field grad = energy_gradient(w, P);
  double gn = 0.0, scale = 0.0;
  const double tp = std::pow(t, P.p - 1.0), tq = std::pow(t, P.q - 1.0);
  for (int i = 0; i < w.size(); ++i) {
    gn += grad[i] * grad[i];
    const double s = std::fabs(tp * pres[i]) + std::fabs(tq * qres[i]);
    scale += s * s;
  }
  rep.residual = std::sqrt(gn) / (std::sqrt(scale) + kZeroFloor);
  rep.energy_at_witness = energy(w, P);
  return rep;
}

/// Samples beta_*(alpha) uniformly on [lambda1(p), 1.2 alpha_*]; failures
/// are recorded per sample without aborting the trace.
inline std::vector<CurveSample> trace_curve(const EigenContext& ctx,
                                            int n_samples,
                                            const SolverOptions& opts = {}) {
  if (n_samples < 2)
    throw std::invalid_argument("trace_curve: requires n_samples >= 2");
  std::vector<CurveSample> out;
  out.reserve(n_samples);
  const double lo = ctx.lambda1_p, hi = 1.2 * ctx.alpha_star;
  for (int i = 0; i < n_samples; ++i) {
    const double alpha = lo + (hi - lo) * i / (n_samples - 1);
    try {
      out.push_back(beta_star_curve(ctx, alpha, opts));
    } catch (const std::exception&) {
      CurveSample bad;
      bad.alpha = alpha;
      bad.converged = false;
      bad.beta_star_alpha = std::numeric_limits<double>::quiet_NaN();
      out.push_back(std::move(bad));
    }
  }
  return out;
}

/// Monotone piecewise-linear interpolant of beta_*(alpha) built from a
/// trace; +infinity left of lambda1(p), lambda1(q) beyond the last sample.
class CurveInterpolant {
 public:
  CurveInterpolant() = default;
  CurveInterpolant(std::vector<CurveSample> samples, double lambda1_p,
                   double lambda1_q)
      : lambda1_p_(lambda1_p), lambda1_q_(lambda1_q) {
    for (const auto& s : samples)
      if (s.converged && std::isfinite(s.beta_star_alpha))
        pts_.emplace_back(s.alpha, s.beta_star_alpha);
    std::sort(pts_.begin(), pts_.end());
    // enforce monotone nonincreasing values
    for (std::size_t i = 1; i < pts_.size(); ++i)
      pts_[i].second = std::min(pts_[i].second, pts_[i - 1].second);
  }

  double operator()(double alpha) const {
    if (alpha < lambda1_p_) return std::numeric_limits<double>::infinity();
    if (pts_.empty()) return lambda1_q_;
    if (alpha <= pts_.front().first) return pts_.front().second;
    if (alpha >= pts_.back().first)
      return std::max(lambda1_q_, pts_.back().second);
    auto it = std::upper_bound(pts_.begin(), pts_.end(),
                               std::make_pair(alpha, 1e300));
    const auto& [x1, y1] = *(it - 1);
    const auto& [x2, y2] = *it;
    const double t = (alpha - x1) / (x2 - x1);
    return (1.0 - t) * y1 + t * y2;
  }

  bool empty() const { return pts_.empty(); }

 private:
  std::vector<std::pair<double, double>> pts_;
  double lambda1_p_ = 0.0;
  double lambda1_q_ = 0.0;
};

}  // namespace nehari
