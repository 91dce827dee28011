#pragma once

#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "nehari/curve.hpp"
#include "nehari/solvers.hpp"

namespace nehari {

/// Open regions of the parameter plane and the separating lines/curve.
/// A: negative least energy, B: empty Nehari set, C: positive least
/// energy, D: least energy unbounded below.
enum class RegionLabel {
  A,
  B,
  C,
  D,
  LineAlpha,  // alpha = lambda1(p)
  LineBeta,   // beta = lambda1(q)
  OnCurve,    // beta = beta_*(alpha)
};

inline const char* region_name(RegionLabel r) {
  switch (r) {
    case RegionLabel::A: return "A";
    case RegionLabel::B: return "B";
    case RegionLabel::C: return "C";
    case RegionLabel::D: return "D";
    case RegionLabel::LineAlpha: return "line_alpha";
    case RegionLabel::LineBeta: return "line_beta";
    case RegionLabel::OnCurve: return "curve";
  }
  return "?";
}

struct PhaseCell {
  double alpha = 0.0, beta = 0.0;
  RegionLabel region = RegionLabel::B;
  ExtendedValue m_class;
  ExtendedValue d_class;
  double residual = -1.0;  // PDE residual of the d-witness when numeric
  std::string diagnostics_code;
  bool failed = false;
};

namespace detail {

inline void classify_line_beta(const EigenContext& ctx, double alpha,
                               const EnergyParams& P,
                               const SolverOptions& opts, PhaseCell& cell) {
  const double ba = rel_band(ctx.alpha_star);
  if (alpha <= ctx.lambda1_p + rel_band(ctx.lambda1_p)) {
    cell.d_class.kind = ValueKind::PlusInfinity;
    cell.m_class.kind = ValueKind::Finite;
    cell.m_class.value = 0.0;
    cell.m_class.attained = Attainment::Yes;
    return;
  }
  cell.m_class.kind = ValueKind::MinusInfinity;
  if (alpha < ctx.alpha_star - ba) {
    FiberedResult r = minimize_fibered(ctx.pair_p.phi, P, SignClass::BPlus,
                                       opts);
    cell.d_class.kind = ValueKind::Finite;
    cell.d_class.value = r.j_value;
    cell.d_class.attained = Attainment::Yes;
    cell.residual = relative_pde_residual(r.witness, P);
  } else if (std::fabs(alpha - ctx.alpha_star) <= ba) {
    cell.d_class.kind = ValueKind::Finite;
    cell.d_class.value = 0.0;
    cell.d_class.attained = Attainment::Yes;
    cell.diagnostics_code = "corner";
  } else {
    cell.d_class.kind = ValueKind::Finite;
    cell.d_class.value = 0.0;
    cell.d_class.attained = Attainment::No;
    cell.diagnostics_code = "vanishing";
  }
}

}  // namespace detail

/// Pure region/value classification of one parameter point. Analytic
/// region logic decides the extended kinds; the fibered solver is invoked
/// only where a finite least energy is predicted.
inline PhaseCell classify(const EigenContext& ctx,
                          const CurveInterpolant& curve, double alpha,
                          double beta, const SolverOptions& opts = {}) {
  PhaseCell cell;
  cell.alpha = alpha;
  cell.beta = beta;
  const double l1p = ctx.lambda1_p, l1q = ctx.lambda1_q;
  const double bp = detail::rel_band(l1p), bq = detail::rel_band(l1q);
  const double bc = curve(alpha);
  const double bandc = std::isfinite(bc) ? detail::rel_band(bc) : 0.0;
  const bool on_ap = std::fabs(alpha - l1p) <= bp;
  const bool on_bq = std::fabs(beta - l1q) <= bq;
  const bool on_curve = std::isfinite(bc) && std::fabs(beta - bc) <= bandc;
  const EnergyParams P(ctx.p, ctx.q, alpha, beta);

  try {
    if (on_bq && !on_curve) {
      cell.region = RegionLabel::LineBeta;
      detail::classify_line_beta(ctx, alpha, P, opts, cell);
      return cell;
    }
    if (on_curve) {
      // includes the segment where the curve meets beta = lambda1(q)
      cell.region = RegionLabel::OnCurve;
      if (on_bq) {
        detail::classify_line_beta(ctx, alpha, P, opts, cell);
        return cell;
      }
      FiberedResult r =
          minimize_fibered(ctx.pair_q.phi, P, SignClass::BMinus, opts);
      cell.d_class.kind = ValueKind::Finite;
      cell.d_class.value = r.j_value;
      cell.d_class.attained = Attainment::Yes;
      cell.residual = relative_pde_residual(r.witness, P);
      if (on_ap) {
        cell.diagnostics_code = "corner";
        if (ctx.p < 2.0 * ctx.q)
          cell.m_class.kind = ValueKind::MinusInfinity;
        else {
          cell.m_class.kind = ValueKind::Finite;
          cell.m_class.value = cell.d_class.value;
          cell.m_class.attained = ctx.p > 2.0 * ctx.q ? Attainment::Yes
                                                      : Attainment::Unknown;
        }
      } else if (alpha > l1p) {
        cell.m_class.kind = ValueKind::MinusInfinity;
      } else {
        cell.m_class = cell.d_class;
      }
      return cell;
    }
    if (on_ap) {
      cell.region = RegionLabel::LineAlpha;
      if (beta < l1q) {
        cell.d_class.kind = ValueKind::PlusInfinity;
        cell.m_class.kind = ValueKind::Finite;
        cell.m_class.value = 0.0;
        cell.m_class.attained = Attainment::Yes;
      } else if (std::isfinite(bc) && beta > bc) {
        cell.d_class.kind = ValueKind::MinusInfinity;
        cell.m_class.kind = ValueKind::MinusInfinity;
        cell.diagnostics_code = "analytic";
      } else {
        FiberedResult r =
            minimize_fibered(ctx.pair_q.phi, P, SignClass::BMinus, opts);
        cell.d_class.kind = ValueKind::Finite;
        cell.d_class.value = r.j_value;
        cell.d_class.attained = Attainment::Yes;
        cell.residual = relative_pde_residual(r.witness, P);
        cell.m_class = cell.d_class;
      }
      return cell;
    }

    if (alpha < l1p) {
      if (beta < l1q) {
        cell.region = RegionLabel::B;
        cell.d_class.kind = ValueKind::PlusInfinity;
        cell.m_class.kind = ValueKind::Finite;
        cell.m_class.value = 0.0;
        cell.m_class.attained = Attainment::Yes;
      } else {
        // beta_*(alpha) is infinite left of lambda1(p): region A
        cell.region = RegionLabel::A;
        FiberedResult r =
            minimize_fibered(ctx.pair_q.phi, P, SignClass::BMinus, opts);
        cell.d_class.kind = ValueKind::Finite;
        cell.d_class.value = r.j_value;
        cell.d_class.attained = Attainment::Yes;
        cell.residual = relative_pde_residual(r.witness, P);
        cell.m_class = cell.d_class;  // the global minimum is Nehari-attained
      }
      return cell;
    }

    // alpha > lambda1(p): m is always unbounded below
    cell.m_class.kind = ValueKind::MinusInfinity;
    if (beta < l1q) {
      cell.region = RegionLabel::C;
      FiberedResult r =
          minimize_fibered(ctx.pair_p.phi, P, SignClass::BPlus, opts);
      cell.d_class.kind = ValueKind::Finite;
      cell.d_class.value = r.j_value;
      cell.d_class.attained = Attainment::Yes;
      cell.residual = relative_pde_residual(r.witness, P);
    } else if (std::isfinite(bc) && beta < bc) {
      cell.region = RegionLabel::A;
      FiberedResult r =
          minimize_fibered(ctx.pair_q.phi, P, SignClass::BMinus, opts);
      cell.d_class.kind = ValueKind::Finite;
      cell.d_class.value = r.j_value;
      cell.d_class.attained = Attainment::Yes;
      cell.residual = relative_pde_residual(r.witness, P);
    } else {
      cell.region = RegionLabel::D;
      cell.d_class.kind = ValueKind::MinusInfinity;
      cell.diagnostics_code = "analytic";
    }
  } catch (const std::exception& e) {
    cell.failed = true;
    cell.diagnostics_code = e.what();
  }
  return cell;
}

/// Row-major grid scan; cells are independent and may fan out over jobs.
inline std::vector<PhaseCell> scan(const EigenContext& ctx,
                                   const CurveInterpolant& curve,
                                   std::pair<double, double> alpha_range,
                                   std::pair<double, double> beta_range,
                                   int na, int nb,
                                   const SolverOptions& opts = {},
                                   int jobs = 1) {
  if (na < 2 || nb < 2)
    throw std::invalid_argument("scan: grid must be at least 2x2");
  std::vector<PhaseCell> cells(static_cast<std::size_t>(na) * nb);
  auto cell_at = [&](int k) {
    const int i = k / na, j = k % na;  // row-major over beta rows
    const double alpha =
        alpha_range.first +
        (alpha_range.second - alpha_range.first) * j / (na - 1);
    const double beta = beta_range.first +
                        (beta_range.second - beta_range.first) * i / (nb - 1);
    cells[k] = classify(ctx, curve, alpha, beta, opts);
  };
  const int total = na * nb;
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (int k = 0; k < total; ++k) cell_at(k);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&, w] {
        for (int k = w; k < total; k += jobs) cell_at(k);
      });
    for (auto& t : pool) t.join();
  }
  return cells;
}

/// Monotonicity audit of the least energy: d is nonincreasing under
/// componentwise increase of (alpha, beta).
struct AuditViolation {
  std::size_t i = 0, j = 0;
  double magnitude = 0.0;
};

struct AuditReport {
  std::size_t checked_pairs = 0;
  std::vector<AuditViolation> violations;
  double max_violation = 0.0;
};

namespace detail {

/// Total preorder value of an extended d for monotone comparison.
inline int kind_rank(const ExtendedValue& v) {
  switch (v.kind) {
    case ValueKind::PlusInfinity: return 2;
    case ValueKind::Finite: return 1;
    case ValueKind::MinusInfinity: return 0;
  }
  return 1;
}

}  // namespace detail

inline AuditReport monotonicity_audit(const std::vector<PhaseCell>& cells,
                                      double tol = 1e-6) {
  AuditReport rep;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const PhaseCell& a = cells[i];
    if (a.failed) continue;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (i == j) continue;
      const PhaseCell& b = cells[j];
      if (b.failed) continue;
      if (!(a.alpha <= b.alpha && a.beta <= b.beta)) continue;
      ++rep.checked_pairs;
      // requirement: d(a) >= d(b)
      const int ra = detail::kind_rank(a.d_class),
                rb = detail::kind_rank(b.d_class);
      double viol = 0.0;
      if (ra < rb)
        viol = 1.0;  // kind-level violation
      else if (ra == 1 && rb == 1) {
        const double slack = b.d_class.value - a.d_class.value;
        if (slack > tol * (1.0 + std::fabs(a.d_class.value))) viol = slack;
      }
      if (viol > 0.0) {
        rep.violations.push_back({i, j, viol});
        rep.max_violation = std::max(rep.max_violation, viol);
      }
    }
  }
  return rep;
}

}  // namespace nehari
