#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nehari/curve.hpp"
#include "nehari/descent.hpp"
#include "nehari/eigen.hpp"
#include "nehari/energy.hpp"
#include "nehari/mesh.hpp"

namespace nehari {

enum class ValueKind { Finite, MinusInfinity, PlusInfinity };
enum class Attainment { Yes, No, Unknown };

/// Value of an extended-real map (global minimum m or least energy d),
/// with attainment status, an optional witness, and divergence evidence.
struct ExtendedValue {
  ValueKind kind = ValueKind::Finite;
  double value = 0.0;  // meaningful only when kind == Finite
  Attainment attained = Attainment::No;
  std::optional<Field> witness;
  std::vector<double> diagnostics;  // probe energies for infinite kinds
  std::string note;
};

struct GroundStateReport {
  ExtendedValue d_value;
  std::optional<Field> u1;  // negative-energy branch witness
  std::optional<Field> u2;  // positive-energy branch witness
  double pde_residual_u1 = -1.0;
  double pde_residual_u2 = -1.0;
};

namespace detail {

/// Regularized version of operator_residual for descent assembly.
inline Field residual_reg(const Field& u, double r, double coef,
                          double cutoff) {
  Field out = stiffness_gradient(u, r, cutoff);
  const double h = u.mesh.h;
  for (int i = 0; i < u.size(); ++i)
    out[i] = out[i] / r - coef * h * signed_pow_huber(u[i], r, cutoff);
  return out;
}

inline double l2(const Field& f) { return std::sqrt(dot(f, f)); }

}  // namespace detail

/// Relative nodal residual of the Euler-Lagrange system at w: norm of the
/// energy gradient against the norm of its constituent magnitudes.
inline double relative_pde_residual(const Field& w, const EnergyParams& P) {
  const Field grad = energy_gradient(w, P);
  const Field kp = detail::stiffness_gradient(w, P.p, 0.0);
  const Field kq = detail::stiffness_gradient(w, P.q, 0.0);
  const double h = w.mesh.h;
  double gn = 0.0, sc = 0.0;
  for (int i = 0; i < w.size(); ++i) {
    gn += grad[i] * grad[i];
    const double s = std::fabs(kp[i]) / P.p +
                     std::fabs(P.alpha) * h * std::pow(std::fabs(w[i]), P.p - 1.0) +
                     std::fabs(kq[i]) / P.q +
                     std::fabs(P.beta) * h * std::pow(std::fabs(w[i]), P.q - 1.0);
    sc += s * s;
  }
  return std::sqrt(gn) / (std::sqrt(sc) + kZeroFloor);
}

/// Result of fibered minimization over one sign cone.
struct FiberedResult {
  Field direction;  // final iterate, ||.||_p = 1
  Field witness;    // Nehari projection t * direction
  double j_value = 0.0;
  double t = 0.0;
  int iterations = 0;
  bool converged = false;
  bool vanished = false;  // iterate degenerated toward the cone boundary
  bool diverged = false;  // J fell below the divergence threshold
};

namespace detail {

/// Gradient of the fibered functional J at u (0-homogeneous):
/// J = -sign(H) c |G|^a / |H|^b with a = p/(p-q), b = q/(p-q);
/// dJ = c a |G|^{a-1} |H|^{-b} G' + c b |G|^a |H|^{-b-1} H' in both cones.
inline Field fibered_gradient(const Field& u, const EnergyParams& P,
                              double H, double G, double cutoff, bool& ok) {
  const double a = P.p / (P.p - P.q), b = P.q / (P.p - P.q);
  const double c = (P.p - P.q) / (P.p * P.q);
  const double w1 = c * a *
                    std::exp((a - 1.0) * std::log(std::fabs(G)) -
                             b * std::log(std::fabs(H)));
  const double w2 = w1 * (b / a) * std::fabs(G) / std::fabs(H);
  ok = std::isfinite(w1) && std::isfinite(w2);
  Field pres = residual_reg(u, P.p, P.alpha, cutoff);
  const Field qres = residual_reg(u, P.q, P.beta, cutoff);
  Field out(u.mesh);
  if (!ok) return out;
  for (int i = 0; i < u.size(); ++i)
    out[i] = w1 * P.q * qres[i] + w2 * P.p * pres[i];
  return out;
}

}  // namespace detail

/// Minimizes the fibered functional J over one sign cone on the sphere
/// ||u||_p = 1, by preconditioned descent; trial steps that leave the cone
/// are rejected, which halves the step through the backtracking search.
inline FiberedResult minimize_fibered(const Field& seed,
                                      const EnergyParams& P, SignClass cone,
                                      const SolverOptions& opts = {}) {
  if (cone != SignClass::BMinus && cone != SignClass::BPlus)
    throw std::invalid_argument("minimize_fibered: cone must be BMinus/BPlus");
  Field u = seed;
  u *= 1.0 / lp_norm(u, P.p);
  if (sign_class(u, P) != cone)
    throw SignError("minimize_fibered: seed is not inside the requested cone");

  FiberedResult res;
  double j = fibered_j(u, P);
  double step = 1.0;
  int stagnant = 0;
  int it = 0;
  const int budget = std::min(opts.max_iters, 20000);
  for (; it < budget; ++it) {
    const double H = h_alpha(u, P), G = g_beta(u, P);
    bool ok = true;
    const Field grad =
        detail::fibered_gradient(u, P, H, G, opts.huber_cutoff, ok);
    if (!ok) break;  // weights degenerate: cone boundary reached

    const Field dir = detail::laplace_solve(grad);
    const double slope = -dot(grad, dir);
    auto value_at = [&](double s) {
      Field trial = u;
      for (int i = 0; i < u.size(); ++i) trial[i] -= s * dir[i];
      if (sign_class(trial, P) != cone)
        return std::numeric_limits<double>::infinity();
      return fibered_j(trial, P);
    };
    const double s = detail::armijo_step(value_at, j, slope,
                                         std::min(4.0 * step, 1.0), opts);
    if (s == 0.0) {
      res.converged = true;
      break;
    }
    step = s;
    for (int i = 0; i < u.size(); ++i) u[i] -= s * dir[i];
    u *= 1.0 / lp_norm(u, P.p);
    const double jn = fibered_j(u, P);
    if (jn < opts.divergence_threshold) {
      res.diverged = true;
      j = jn;
      break;
    }
    stagnant = std::fabs(j - jn) <= opts.tol_rel * std::fabs(jn) ? stagnant + 1
                                                                 : 0;
    j = jn;
    if (stagnant >= 5) {
      res.converged = true;
      break;
    }
  }
  if (it == budget) res.converged = true;  // stalled inside the budget

  res.iterations = it;
  res.j_value = j;
  const double H = h_alpha(u, P), G = g_beta(u, P);
  if (H * G < 0.0) {
    res.t = std::pow(-G / H, 1.0 / (P.p - P.q));
    res.witness = u;
    res.witness *= res.t;
  } else {
    res.t = 0.0;
    res.witness = Field(u.mesh);
  }
  res.direction = std::move(u);
  // degenerate minimizing sequence: the Nehari projection collapses to 0
  res.vanished = (res.t < 1e-4 && std::fabs(j) < 1e-8);
  return res;
}

/// Direct preconditioned descent on the energy with a divergence guard.
struct DirectResult {
  Field u;
  double value = 0.0;
  bool diverged = false;
  std::vector<double> trace;
  int iterations = 0;
};

inline DirectResult direct_minimize(const Field& seed, const EnergyParams& P,
                                    const SolverOptions& opts = {}) {
  DirectResult res;
  Field u = seed;
  double f = energy(u, P);
  res.trace.push_back(f);
  double step = 1.0;
  int stagnant = 0;
  const int budget = std::min(opts.max_iters, 50000);
  int it = 0;
  for (; it < budget; ++it) {
    if (f < opts.divergence_threshold) {
      res.diverged = true;
      break;
    }
    Field pres = detail::residual_reg(u, P.p, P.alpha, opts.huber_cutoff);
    const Field qres = detail::residual_reg(u, P.q, P.beta, opts.huber_cutoff);
    pres += qres;  // = E' (regularized)
    const Field dir = detail::laplace_solve(pres);
    const double slope = -dot(pres, dir);
    auto value_at = [&](double s) {
      Field trial = u;
      for (int i = 0; i < u.size(); ++i) trial[i] -= s * dir[i];
      return energy(trial, P);
    };
    const double s = detail::armijo_step(value_at, f, slope,
                                         std::min(4.0 * step, 1.0), opts);
    if (s == 0.0) break;
    step = s;
    for (int i = 0; i < u.size(); ++i) u[i] -= s * dir[i];
    const double fn = energy(u, P);
    stagnant = std::fabs(f - fn) <= opts.tol_rel * (std::fabs(fn) + 1e-300)
                   ? stagnant + 1
                   : 0;
    f = fn;
    res.trace.push_back(f);
    if (stagnant >= 5) break;
  }
  res.u = std::move(u);
  res.value = f;
  res.iterations = it;
  return res;
}

namespace detail {

/// Samples E along the ray t * v for t = 2^k until the energy drops below
/// the divergence threshold; returns the recorded energies.
inline std::vector<double> ray_divergence_probe(const Field& v,
                                                const EnergyParams& P,
                                                double threshold) {
  std::vector<double> out;
  double t = 1.0;
  for (int k = 0; k < 300; ++k) {
    Field w = v;
    w *= t;
    const double e = energy(w, P);
    if (!std::isfinite(e)) break;
    out.push_back(e);
    if (e < threshold) break;
    t *= 2.0;
  }
  return out;
}

/// Samples J along the family u_eps = v0 + eps * theta for eps = 2^{-k}
/// until J drops below the threshold. Requires the family to enter BMinus.
inline std::vector<double> fibered_divergence_probe(const Field& v0,
                                                    const Field& theta,
                                                    const EnergyParams& P,
                                                    double threshold) {
  std::vector<double> out;
  for (int k = 0; k <= 200; ++k) {
    const double eps = std::ldexp(1.0, -k);
    Field u = theta;
    u *= eps;
    u += v0;
    const double H = h_alpha(u, P), G = g_beta(u, P);
    if (!(H > 0.0 && G < 0.0)) continue;
    const double j = fibered_j_from(H, G, P);
    out.push_back(j);
    if (j < threshold) break;
  }
  return out;
}

/// Probe direction with a guaranteed positive pairing against H'(v0):
/// the preconditioned constraint gradient, normalized in energy scale.
inline Field probe_direction(const Field& v0, const EnergyParams& P) {
  const Field pres = h_gradient_scaled(v0, P);
  Field theta = laplace_solve(pres);
  const double n = grad_norm(theta, P.p);
  if (n > 0.0) theta *= 1.0 / n;
  return theta;
}

/// Single-node spike with ||theta'||_p = 1, centered in the mesh. The
/// discrete analogue of a concentrating bump: its q-energy and masses are
/// O(h^{(p-q)/p}) small.
inline Field unit_spike(const Mesh& mesh, double p) {
  Field theta(mesh);
  // K_p(spike of amplitude A) = 2 A^p h^{1-p}; choose A so K_p = 1.
  theta[mesh.n / 2] = std::pow(0.5 * std::pow(mesh.h, p - 1.0), 1.0 / p);
  return theta;
}

/// For alpha above alpha_*: shell point v = phi_q + gamma * spike with
/// H_alpha(v) = 0 found by bisection on gamma; the concentrating-bump
/// construction of the unbounded branch. Returns nullopt if no crossing.
inline std::optional<Field> shell_point(const EigenContext& ctx, double alpha,
                                        const EnergyParams& P) {
  const Field theta = unit_spike(ctx.mesh, ctx.p);
  auto H = [&](double g) {
    Field v = theta;
    v *= g;
    v += ctx.pair_q.phi;
    return h_alpha(v, P.with(alpha, P.beta));
  };
  if (H(0.0) >= 0.0) return std::nullopt;
  double hi = 1.0;
  while (H(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e8) return std::nullopt;
  }
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (H(mid) < 0.0 ? lo : hi) = mid;
  }
  Field v = theta;
  v *= hi;
  v += ctx.pair_q.phi;
  return v;
}

inline double rel_band(double x) { return 1e-6 * (1.0 + std::fabs(x)); }

/// Smoothed probe direction pairing negatively with G'(phi_p), used by the
/// boundedness dichotomy at the corner (lambda1(p), beta_*). Precondition
/// and normalize in the gradient norm so the direction is an O(1) function.
inline Field dichotomy_direction(const EigenContext& ctx,
                                 const EnergyParams& P) {
  Field theta = laplace_solve(g_gradient_scaled(ctx.pair_p.phi, P));
  theta *= -1.0 / (grad_norm(theta, P.p) + kZeroFloor);
  return theta;
}

}  // namespace detail

/// Evidence that the least energy is unbounded below at (alpha, beta) with
/// beta > beta_*(alpha): builds v0 with H(v0) ~ 0, G(v0) < 0 and probes
/// J(v0 + eps theta) downwards. Returns the probe energies (possibly not
/// reaching the threshold when the mesh cannot resolve the construction).
inline std::vector<double> least_energy_divergence_probe(
    const EigenContext& ctx, const CurveInterpolant& curve,
    const EnergyParams& P, const SolverOptions& opts = {}) {
  const double a = P.alpha;
  std::optional<Field> v0;
  if (std::fabs(a - ctx.lambda1_p) <= detail::rel_band(ctx.lambda1_p)) {
    v0 = ctx.pair_p.phi;
  } else if (a < ctx.alpha_star - detail::rel_band(ctx.alpha_star) &&
             a > ctx.lambda1_p) {
    CurveSample s = beta_star_curve(ctx, a, opts);
    if (g_beta(s.minimizer, P) < 0.0) v0 = s.minimizer;
  }
  if (!v0) {
    // alpha at or above alpha_*: concentrating-bump shell construction
    auto sp = detail::shell_point(ctx, a, P);
    if (sp && g_beta(*sp, P) < 0.0) v0 = sp;
  }
  if (!v0) return {};
  const Field theta = detail::probe_direction(*v0, P);
  return detail::fibered_divergence_probe(*v0, theta, P,
                                          opts.divergence_threshold);
}

/// Global minimum m(alpha, beta) of the energy over the whole space.
inline ExtendedValue global_min(const EigenContext& ctx,
                                const EnergyParams& P,
                                const SolverOptions& opts = {}) {
  const double l1p = ctx.lambda1_p, l1q = ctx.lambda1_q, bs = ctx.beta_star;
  const double bp = detail::rel_band(l1p), bq = detail::rel_band(l1q);
  const double bb = detail::rel_band(bs);
  ExtendedValue out;

  if (P.alpha > l1p + bp) {
    // supercritical alpha: E unbounded below along the phi_p ray
    out.kind = ValueKind::MinusInfinity;
    out.diagnostics = detail::ray_divergence_probe(ctx.pair_p.phi, P,
                                                   opts.divergence_threshold);
    return out;
  }
  if (P.beta <= l1q + bq) {
    // both terms nonnegative: zero is the unique global minimizer
    out.kind = ValueKind::Finite;
    out.value = 0.0;
    out.attained = Attainment::Yes;
    out.witness = Field(ctx.mesh);
    return out;
  }
  const bool on_l1p = std::fabs(P.alpha - l1p) <= bp;
  if (on_l1p && P.beta > bs + bb) {
    // H(phi_p) = 0 while G(phi_p) < 0: the phi_p ray diverges
    out.kind = ValueKind::MinusInfinity;
    out.diagnostics = detail::ray_divergence_probe(ctx.pair_p.phi, P,
                                                   opts.divergence_threshold);
    return out;
  }
  if (on_l1p && std::fabs(P.beta - bs) <= bb && P.p < 2.0 * P.q) {
    // corner point, subcritical branch of the dichotomy: unbounded below
    out.kind = ValueKind::MinusInfinity;
    out.diagnostics = detail::fibered_divergence_probe(
        ctx.pair_p.phi, detail::dichotomy_direction(ctx, P), P,
        opts.divergence_threshold);
    out.note = "corner dichotomy: p < 2q";
    return out;
  }

  // finite branch: descend from the Nehari projection of phi_q
  Field seed = ctx.pair_q.phi;
  seed *= t_projection(seed, P);
  DirectResult r = direct_minimize(seed, P, opts);
  if (r.diverged) {
    out.kind = ValueKind::MinusInfinity;
    out.diagnostics = std::move(r.trace);
    return out;
  }
  out.kind = ValueKind::Finite;
  out.value = std::min(r.value, 0.0);  // zero is always admissible
  out.attained = Attainment::Yes;
  out.witness = std::move(r.u);
  if (on_l1p && std::fabs(P.beta - bs) <= bb) {
    if (P.p == 2.0 * P.q) {
      out.attained = Attainment::Unknown;
      out.note = "corner dichotomy: p = 2q, attainment undecided";
    } else {
      out.note = "corner dichotomy: p > 2q";
    }
  }
  return out;
}

/// Least energy d(alpha, beta) over the Nehari set, with region-based
/// decision logic and witness certification.
inline GroundStateReport ground_state(const EigenContext& ctx,
                                      const CurveInterpolant& curve,
                                      const EnergyParams& P,
                                      const SolverOptions& opts = {}) {
  const double l1p = ctx.lambda1_p, l1q = ctx.lambda1_q;
  const double as = ctx.alpha_star;
  const double bp = detail::rel_band(l1p), bq = detail::rel_band(l1q);
  const double ba = detail::rel_band(as);
  GroundStateReport rep;
  ExtendedValue& d = rep.d_value;

  if (P.alpha <= l1p + bp && P.beta <= l1q + bq) {
    // both quadratic forms nonnegative: the Nehari set is empty
    d.kind = ValueKind::PlusInfinity;
    d.note = "empty Nehari set";
    return rep;
  }

  const double bc = curve(P.alpha);
  const double band_c =
      std::isfinite(bc) ? detail::rel_band(bc) : 0.0;
  if (std::isfinite(bc) && P.beta > bc + band_c) {
    d.kind = ValueKind::MinusInfinity;
    d.diagnostics = least_energy_divergence_probe(ctx, curve, P, opts);
    if (d.diagnostics.empty() ||
        d.diagnostics.back() > opts.divergence_threshold)
      d.note = "resolution-limited divergence evidence";
    return rep;
  }

  const bool on_l1q = std::fabs(P.beta - l1q) <= bq;
  if (on_l1q && P.alpha > l1p + bp) {
    if (P.alpha < as - ba) {
      // positive branch still attained on the line beta = lambda1(q)
      FiberedResult r =
          minimize_fibered(ctx.pair_p.phi, P, SignClass::BPlus, opts);
      d.kind = ValueKind::Finite;
      d.value = r.j_value;
      d.attained = Attainment::Yes;
      d.witness = r.witness;
      rep.u2 = r.witness;
      rep.pde_residual_u2 = relative_pde_residual(r.witness, P);
      d.note = "boundary beta = lambda1(q)";
      return rep;
    }
    if (std::fabs(P.alpha - as) <= ba) {
      // degenerate corner: phi_q itself lies on the Nehari set with E = 0
      d.kind = ValueKind::Finite;
      d.value = 0.0;
      d.attained = Attainment::Yes;
      d.witness = ctx.pair_q.phi;
      d.note = "corner (alpha_*, lambda1(q)): attained by phi_q";
      rep.u2 = ctx.pair_q.phi;
      rep.pde_residual_u2 = relative_pde_residual(ctx.pair_q.phi, P);
      return rep;
    }
    // alpha beyond alpha_*: the infimum vanishes along the degenerating
    // family w = phi_q + delta v, which stays in BPlus with J -> 0 and
    // Nehari projection t -> 0; the infimum is not attained
    d.kind = ValueKind::Finite;
    d.value = 0.0;
    d.attained = Attainment::Unknown;
    Field v = ctx.pair_p.phi;
    v *= 1.0 / lp_norm(v, P.p);
    for (int k = 0; k <= 60; ++k) {
      Field w = v;
      w *= std::ldexp(1.0, -k);
      w += ctx.pair_q.phi;
      const double H = h_alpha(w, P), G = g_beta(w, P);
      if (!(H < 0.0 && G > 0.0)) continue;
      const double j = fibered_j_from(H, G, P);
      const double t = std::pow(-G / H, 1.0 / (P.p - P.q));
      d.diagnostics.push_back(j);
      if (t * lp_norm(w, P.p) < 1e-4 && std::fabs(j) < 1e-8) {
        d.attained = Attainment::No;
        break;
      }
    }
    d.note = "vanishing minimizing sequence on beta = lambda1(q)";
    return rep;
  }

  if (P.beta < l1q - bq && P.alpha > l1p + bp) {
    // positive-energy branch
    FiberedResult r =
        minimize_fibered(ctx.pair_p.phi, P, SignClass::BPlus, opts);
    d.kind = ValueKind::Finite;
    d.value = r.j_value;
    d.attained = Attainment::Yes;
    d.witness = r.witness;
    rep.u2 = r.witness;
    rep.pde_residual_u2 = relative_pde_residual(r.witness, P);
    return rep;
  }

  if (P.beta > l1q + bq) {
    // negative-energy branch: beta <= beta_*(alpha) here
    FiberedResult r =
        minimize_fibered(ctx.pair_q.phi, P, SignClass::BMinus, opts);
    d.kind = ValueKind::Finite;
    d.value = r.j_value;
    d.attained = Attainment::Yes;
    d.witness = r.witness;
    rep.u1 = r.witness;
    rep.pde_residual_u1 = relative_pde_residual(r.witness, P);
    if (r.diverged) d.note = "descent guard tripped; value is a bound";
    else if (std::isfinite(bc) && std::fabs(P.beta - bc) <= band_c)
      d.note = "on the threshold curve";
    return rep;
  }

  d.kind = ValueKind::PlusInfinity;
  d.note = "unclassified boundary point";
  return rep;
}

/// Two-solution search in the multiplicity region
/// lambda1(p) < alpha < alpha_*, lambda1(q) < beta <= beta_*(alpha).
inline GroundStateReport multiplicity_search(const EigenContext& ctx,
                                             const CurveInterpolant& curve,
                                             const EnergyParams& P,
                                             const SolverOptions& opts = {}) {
  GroundStateReport rep;
  FiberedResult r1 =
      minimize_fibered(ctx.pair_q.phi, P, SignClass::BMinus, opts);
  rep.d_value.kind = ValueKind::Finite;
  rep.d_value.value = r1.j_value;
  rep.d_value.attained = Attainment::Yes;
  rep.d_value.witness = r1.witness;
  rep.u1 = r1.witness;
  rep.pde_residual_u1 = relative_pde_residual(r1.witness, P);

  const double bc = curve(P.alpha);
  if (std::isfinite(bc) && std::fabs(P.beta - bc) <= detail::rel_band(bc)) {
    // on the curve the second solution is the rescaled curve minimizer
    CurveSample s = beta_star_curve(ctx, P.alpha, opts);
    KktReport k = verify_kkt(s, P.with(P.alpha, s.beta_star_alpha));
    Field w = s.minimizer;
    w *= k.t;
    rep.u2 = w;
    rep.pde_residual_u2 = relative_pde_residual(w, P);
  } else {
    FiberedResult r2 =
        minimize_fibered(ctx.pair_p.phi, P, SignClass::BPlus, opts);
    rep.u2 = r2.witness;
    rep.pde_residual_u2 = relative_pde_residual(r2.witness, P);
  }
  return rep;
}

/// Report of the boundedness dichotomy experiment at the corner
/// (lambda1(p), beta_*): J along u_eps = phi_p + eps theta where theta
/// pairs negatively with G'(phi_p).
enum class DichotomyVerdict { Divergent, Bounded, Inconclusive };

struct ProbeReport {
  std::vector<double> epsilons;
  std::vector<double> j_values;
  double slope = 0.0;  // log-log slope of |J| against eps
  double min_j = 0.0;
  DichotomyVerdict verdict = DichotomyVerdict::Inconclusive;
};

inline ProbeReport dichotomy_probe(const EigenContext& ctx,
                                   const SolverOptions& opts = {},
                                   int k_max = 20) {
  const EnergyParams P(ctx.p, ctx.q, ctx.lambda1_p, ctx.beta_star);
  const Field theta = detail::dichotomy_direction(ctx, P);

  ProbeReport rep;
  rep.min_j = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k) {
    const double eps = std::ldexp(1.0, -k);
    Field u = theta;
    u *= eps;
    u += ctx.pair_p.phi;
    const double H = h_alpha(u, P), G = g_beta(u, P);
    if (!(H > 0.0 && G < 0.0)) continue;
    const double j = fibered_j_from(H, G, P);
    rep.epsilons.push_back(eps);
    rep.j_values.push_back(j);
    rep.min_j = std::min(rep.min_j, j);
  }
  // least-squares slope of ln|J| against ln(eps)
  const int m = static_cast<int>(rep.epsilons.size());
  if (m >= 3) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
      const double x = std::log(rep.epsilons[i]);
      const double y = std::log(std::fabs(rep.j_values[i]) + 1e-300);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    if (rep.slope < -0.1)
      rep.verdict = DichotomyVerdict::Divergent;
    else if (rep.slope > 0.1)
      rep.verdict = DichotomyVerdict::Bounded;
  }
  return rep;
}

/// Trend of a parameter sweep toward a boundary of the finite region.
enum class SweepTrend { DivergentToPhiP, VanishingToPhiQ, BoundedConvergent };

struct SweepPoint {
  double alpha = 0.0, beta = 0.0;
  double energy = 0.0;
  double norm_p = 0.0, grad_p = 0.0;
  double dist_phi_p = 1.0, dist_phi_q = 1.0;
  std::optional<Field> witness;
  bool ok = false;
};

struct SweepReport {
  std::vector<SweepPoint> points;
  SweepTrend trend = SweepTrend::BoundedConvergent;
  double final_profile_distance = 1.0;
  int failures = 0;
};

inline SweepReport boundary_sweep(
    const EigenContext& ctx, const CurveInterpolant& curve,
    const std::vector<std::pair<double, double>>& path,
    const SolverOptions& opts = {}) {
  SweepReport rep;
  for (const auto& [alpha, beta] : path) {
    SweepPoint pt;
    pt.alpha = alpha;
    pt.beta = beta;
    try {
      const EnergyParams P(ctx.p, ctx.q, alpha, beta);
      GroundStateReport g = ground_state(ctx, curve, P, opts);
      const Field* w = nullptr;
      if (g.d_value.witness && max_abs(*g.d_value.witness) > 0.0)
        w = &*g.d_value.witness;
      if (g.d_value.kind == ValueKind::MinusInfinity) {
        pt.energy = g.d_value.diagnostics.empty()
                        ? -std::numeric_limits<double>::infinity()
                        : g.d_value.diagnostics.back();
      }
      if (w) {
        pt.energy = energy(*w, P);
        pt.norm_p = lp_norm(*w, P.p);
        pt.grad_p = grad_norm(*w, P.p);
        pt.dist_phi_p = normalized_l2_distance(*w, ctx.pair_p.phi);
        pt.dist_phi_q = normalized_l2_distance(*w, ctx.pair_q.phi);
        pt.witness = *w;
        pt.ok = true;
      }
    } catch (const std::exception&) {
      ++rep.failures;
    }
    rep.points.push_back(pt);
  }

  // classify the trend on the surviving points
  std::vector<const SweepPoint*> okpts;
  for (const auto& p : rep.points)
    if (p.ok) okpts.push_back(&p);
  if (okpts.size() >= 2) {
    const SweepPoint& first = *okpts.front();
    const SweepPoint& last = *okpts.back();
    if (last.energy < -1e3 && last.energy < first.energy &&
        last.norm_p > first.norm_p) {
      rep.trend = SweepTrend::DivergentToPhiP;
      rep.final_profile_distance = last.dist_phi_p;
    } else if (std::fabs(last.energy) < 1e-3 &&
               last.grad_p < 0.5 * first.grad_p) {
      rep.trend = SweepTrend::VanishingToPhiQ;
      rep.final_profile_distance = last.dist_phi_q;
    } else {
      rep.trend = SweepTrend::BoundedConvergent;
      // convergence measured between the last two witnesses
      const SweepPoint& prev = *okpts[okpts.size() - 2];
      rep.final_profile_distance =
          (prev.witness && last.witness)
              ? normalized_l2_distance(*prev.witness, *last.witness)
              : 1.0;
    }
  }
  return rep;
}

}  // namespace nehari
