#pragma once

#include <cmath>
#include <stdexcept>

#include "nehari/mesh.hpp"

namespace nehari {

inline constexpr double kZeroFloor = 1e-12;

/// Problem parameters of the (p,q)-Laplacian energy, with p > q > 1.
struct EnergyParams {
  double p;
  double q;
  double alpha;
  double beta;

  EnergyParams(double p_, double q_, double alpha_, double beta_)
      : p(p_), q(q_), alpha(alpha_), beta(beta_) {
    if (!(p > q && q > 1.0))
      throw std::invalid_argument("EnergyParams: requires p > q > 1");
  }

  EnergyParams with(double a, double b) const {
    return EnergyParams(p, q, a, b);
  }
};

/// Thrown when a ray projection is requested outside its sign hypothesis.
struct SignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SignClass { BMinus, BPlus, OnNehariBoundary, Indefinite };

/// |t|^{r-2} t, continuously extended by 0 at t = 0.
inline double signed_pow(double t, double r) {
  if (t == 0.0) return 0.0;
  return std::pow(std::fabs(t), r - 2.0) * t;
}

inline double h_alpha(const Field& u, const EnergyParams& P) {
  return grad_norm_pow(u, P.p) - P.alpha * lp_norm_pow(u, P.p);
}

inline double g_beta(const Field& u, const EnergyParams& P) {
  return grad_norm_pow(u, P.q) - P.beta * lp_norm_pow(u, P.q);
}

inline double energy(const Field& u, const EnergyParams& P) {
  return h_alpha(u, P) / P.p + g_beta(u, P) / P.q;
}

/// Nodal residual of the r-part of the operator: component i equals
/// d/du_i [ ||u'||_r^r / r - (coef/r) ||u||_r^r ].
inline Field operator_residual(const Field& u, double r, double coef) {
  const double h = u.mesh.h;
  Field out(u.mesh);
  double flux_prev = signed_pow(u.at(0) / h, r);  // edge between nodes -1,0
  for (int i = 0; i < u.size(); ++i) {
    const double flux_next = signed_pow((u.at(i + 1) - u.at(i)) / h, r);
    out[i] = flux_prev - flux_next - coef * h * signed_pow(u[i], r);
    flux_prev = flux_next;
  }
  return out;
}

/// Gradient of the discrete energy; a zero vector characterizes a
/// discrete weak solution of the generalized eigenvalue problem.
inline Field energy_gradient(const Field& u, const EnergyParams& P) {
  Field rp = operator_residual(u, P.p, P.alpha);
  Field rq = operator_residual(u, P.q, P.beta);
  rp += rq;
  return rp;
}

/// H'(u)/p as a nodal vector.
inline Field h_gradient_scaled(const Field& u, const EnergyParams& P) {
  return operator_residual(u, P.p, P.alpha);
}

/// G'(u)/q as a nodal vector.
inline Field g_gradient_scaled(const Field& u, const EnergyParams& P) {
  return operator_residual(u, P.q, P.beta);
}

inline double nehari_residual(const Field& u, const EnergyParams& P) {
  if (max_abs(u) == 0.0)
    throw std::invalid_argument("nehari_residual: u must be nonzero");
  return h_alpha(u, P) + g_beta(u, P);
}

inline bool on_nehari(const Field& u, const EnergyParams& P,
                      double tol = 1e-8) {
  const double H = h_alpha(u, P), G = g_beta(u, P);
  return std::fabs(H + G) <= tol * (std::fabs(H) + std::fabs(G) + kZeroFloor);
}

namespace detail {
inline void require_sign_separation(double H, double G) {
  const double scale = std::fabs(H) + std::fabs(G) + kZeroFloor;
  if (!(H * G < 0.0) || std::fabs(H) < 10.0 * kZeroFloor * scale ||
      std::fabs(G) < 10.0 * kZeroFloor * scale)
    throw SignError("ray projection requires H_alpha(u) * G_beta(u) < 0");
}
}  // namespace detail

/// Unique t > 0 with t(u)u on the Nehari manifold; requires H*G < 0.
inline double t_projection(const Field& u, const EnergyParams& P) {
  const double H = h_alpha(u, P), G = g_beta(u, P);
  detail::require_sign_separation(H, G);
  return std::pow(-G / H, 1.0 / (P.p - P.q));
}

/// Fibered value J(u) = E(t(u)u); 0-homogeneous, sign opposite to H.
inline double fibered_j(const Field& u, const EnergyParams& P) {
  const double H = h_alpha(u, P), G = g_beta(u, P);
  detail::require_sign_separation(H, G);
  const double c = (P.p - P.q) / (P.p * P.q);
  const double val = c * std::pow(std::fabs(G), P.p / (P.p - P.q)) /
                     std::pow(std::fabs(H), P.q / (P.p - P.q));
  return (H > 0.0) ? -val : val;
}

/// Fibered value from precomputed H and G (same formula, no re-assembly).
inline double fibered_j_from(double H, double G, const EnergyParams& P) {
  detail::require_sign_separation(H, G);
  const double c = (P.p - P.q) / (P.p * P.q);
  const double val = c * std::pow(std::fabs(G), P.p / (P.p - P.q)) /
                     std::pow(std::fabs(H), P.q / (P.p - P.q));
  return (H > 0.0) ? -val : val;
}

inline SignClass sign_class(const Field& u, const EnergyParams& P,
                            double tol = 1e-9) {
  if (max_abs(u) == 0.0)
    throw std::invalid_argument("sign_class: u must be nonzero");
  const double H = h_alpha(u, P), G = g_beta(u, P);
  const double sH = std::fabs(grad_norm_pow(u, P.p)) +
                    std::fabs(P.alpha) * lp_norm_pow(u, P.p) + kZeroFloor;
  const double sG = std::fabs(grad_norm_pow(u, P.q)) +
                    std::fabs(P.beta) * lp_norm_pow(u, P.q) + kZeroFloor;
  if (std::fabs(H) <= tol * sH || std::fabs(G) <= tol * sG)
    return SignClass::OnNehariBoundary;
  if (H > 0.0 && G < 0.0) return SignClass::BMinus;
  if (H < 0.0 && G > 0.0) return SignClass::BPlus;
  return SignClass::Indefinite;
}

}  // namespace nehari
