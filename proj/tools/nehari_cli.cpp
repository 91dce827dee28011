// Command-line front end: eigen-structure, threshold-curve tracing,
// parameter-plane scans, ground-state / global-minimum queries, boundary
// sweeps, and the boundedness dichotomy experiment.
//
// Exit codes: 0 success, 2 usage error, 3 solver/audit failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nehari/analytic.hpp"
#include "nehari/curve.hpp"
#include "nehari/eigen.hpp"
#include "nehari/phase.hpp"
#include "nehari/solvers.hpp"

using nlohmann::json;
using namespace nehari;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

struct CommonConfig {
  double a = 0.0, b = 1.0;
  int n = 127;
  double p = 3.0, q = 2.0;
  double tol_rel = 1e-10;
  double tol_grad = 1e-8;
  std::string out;
  bool emit_witness = false;
  int jobs = 1;
};

SolverOptions make_opts(const CommonConfig& cfg) {
  SolverOptions opts;
  opts.tol_rel = cfg.tol_rel;
  opts.tol_grad = cfg.tol_grad;
  return opts;
}

json config_json(const CommonConfig& cfg) {
  return json{{"domain", {cfg.a, cfg.b}}, {"n", cfg.n},
              {"p", cfg.p},               {"q", cfg.q},
              {"tol_rel", cfg.tol_rel},   {"tol_grad", cfg.tol_grad},
              {"jobs", cfg.jobs}};
}

json field_json(const Field& f) {
  return json(f.values);
}

const char* kind_str(ValueKind k) {
  switch (k) {
    case ValueKind::Finite: return "finite";
    case ValueKind::MinusInfinity: return "-inf";
    case ValueKind::PlusInfinity: return "+inf";
  }
  return "?";
}

const char* attained_str(Attainment a) {
  switch (a) {
    case Attainment::Yes: return "yes";
    case Attainment::No: return "no";
    case Attainment::Unknown: return "unknown";
  }
  return "?";
}

json extended_json(const ExtendedValue& v, bool emit_witness) {
  json j{{"kind", kind_str(v.kind)}, {"attained", attained_str(v.attained)}};
  if (v.kind == ValueKind::Finite) j["value"] = v.value;
  if (!v.diagnostics.empty()) j["diagnostics"] = v.diagnostics;
  if (!v.note.empty()) j["note"] = v.note;
  if (emit_witness && v.witness) j["witness"] = field_json(*v.witness);
  return j;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text << "\n";
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

int resolve_jobs(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("NEHARI_LAB_JOBS")) {
    const int j = std::atoi(env);
    if (j > 0) return j;
  }
  return 1;
}

void add_common_flags(CLI::App* cmd, CommonConfig& cfg,
                      std::vector<double>& domain) {
  cmd->add_option("--n", cfg.n, "interior grid nodes")
      ->check(CLI::Range(16, 100000));
  cmd->add_option("--domain", domain, "interval endpoints a,b")
      ->delimiter(',')
      ->expected(2);
  cmd->add_option("--p", cfg.p, "larger exponent");
  cmd->add_option("--q", cfg.q, "smaller exponent");
  cmd->add_option("--tol-rel", cfg.tol_rel, "relative stagnation tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-grad", cfg.tol_grad, "gradient tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", cfg.out, "output path (default: stdout)");
  cmd->add_flag("--emit-witness", cfg.emit_witness,
                "embed nodal witness arrays in JSON output");
  cmd->add_option("--jobs", cfg.jobs, "parallel workers (phase/curve)");
}

void finalize_config(CommonConfig& cfg, const std::vector<double>& domain) {
  if (domain.size() == 2) {
    cfg.a = domain[0];
    cfg.b = domain[1];
  }
  if (!(cfg.b > cfg.a)) throw CLI::ValidationError("--domain", "requires b > a");
  cfg.jobs = resolve_jobs(cfg.jobs);
}

void check_pq(const CommonConfig& cfg) {
  if (!(cfg.p > cfg.q && cfg.q > 1.0))
    throw CLI::ValidationError("--p/--q", "requires p > q > 1");
}

int cmd_eigen(const CommonConfig& cfg, double r) {
  if (!(r > 1.0)) {
    std::cerr << "eigen: requires r > 1\n";
    return kExitUsage;
  }
  Mesh mesh(cfg.a, cfg.b, cfg.n);
  try {
    EigenPair pair = solve_first_eigen(mesh, r, make_opts(cfg));
    const double oracle = exact_lambda1(r, mesh.length());
    json out{{"config", config_json(cfg)},
             {"r", r},
             {"lambda1", pair.lambda1},
             {"iterations", pair.iterations},
             {"residual", pair.residual},
             {"oracle", oracle},
             {"oracle_rel_error",
              std::fabs(pair.lambda1 - oracle) / oracle},
             {"phi", field_json(pair.phi)}};
    write_output(cfg.out, out.dump(2));
    if (!cfg.out.empty()) {
      // companion two-column profile
      std::ofstream prof(cfg.out + ".profile", std::ios::binary);
      prof.precision(17);
      for (int i = 0; i < pair.phi.size(); ++i)
        prof << mesh.node(i) << " " << pair.phi[i] << "\n";
    }
    std::cerr << "lambda1 = " << pair.lambda1 << " (oracle " << oracle
              << ")\n";
    return kExitOk;
  } catch (const NonConvergence& e) {
    json out{{"error", e.what()}, {"best_value", e.best_value}};
    write_output(cfg.out, out.dump(2));
    std::cerr << "eigen: " << e.what() << " (best " << e.best_value << ")\n";
    return kExitSolver;
  }
}

int cmd_curve(const CommonConfig& cfg, int samples) {
  Mesh mesh(cfg.a, cfg.b, cfg.n);
  const SolverOptions opts = make_opts(cfg);
  EigenContext ctx(mesh, cfg.p, cfg.q, opts);
  std::vector<CurveSample> trace = trace_curve(ctx, samples, opts);

  int failed = 0;
  bool monotone = true;
  std::ostringstream csv;
  csv << "alpha,beta_star,constraint_value,kkt_residual\n";
  double prev = std::numeric_limits<double>::infinity();
  for (auto& s : trace) {
    if (!s.converged || !std::isfinite(s.beta_star_alpha)) {
      ++failed;
      continue;
    }
    KktReport k = verify_kkt(
        s, EnergyParams(cfg.p, cfg.q, s.alpha, s.beta_star_alpha));
    s.kkt_residual = k.residual;
    if (s.beta_star_alpha > prev + 1e-9 * (1.0 + std::fabs(prev)))
      monotone = false;
    prev = s.beta_star_alpha;
    csv << format_double(s.alpha) << "," << format_double(s.beta_star_alpha)
        << "," << format_double(s.constraint_value) << ","
        << format_double(s.kkt_residual) << "\n";
  }
  write_output(cfg.out, csv.str());

  json summary{{"config", config_json(cfg)},
               {"lambda1_p", ctx.lambda1_p},
               {"lambda1_q", ctx.lambda1_q},
               {"alpha_star", ctx.alpha_star},
               {"beta_star", ctx.beta_star},
               {"samples", samples},
               {"failed", failed},
               {"monotone_nonincreasing", monotone}};
  std::cerr << summary.dump(2) << "\n";
  if (failed * 5 > samples) return kExitSolver;
  return kExitOk;
}

int cmd_phase(const CommonConfig& cfg, std::vector<double> alpha_range,
              std::vector<double> beta_range, std::vector<int> grid) {
  Mesh mesh(cfg.a, cfg.b, cfg.n);
  const SolverOptions opts = make_opts(cfg);
  EigenContext ctx(mesh, cfg.p, cfg.q, opts);
  CurveInterpolant curve(trace_curve(ctx, 24, opts), ctx.lambda1_p,
                         ctx.lambda1_q);
  if (alpha_range.empty())
    alpha_range = {ctx.lambda1_p - 2.0, ctx.alpha_star + 2.0};
  if (beta_range.empty())
    beta_range = {ctx.lambda1_q - 2.0, ctx.beta_star + 2.0};
  if (grid.empty()) grid = {21, 21};

  std::vector<PhaseCell> cells =
      scan(ctx, curve, {alpha_range[0], alpha_range[1]},
           {beta_range[0], beta_range[1]}, grid[0], grid[1], opts, cfg.jobs);

  std::ostringstream csv;
  csv << "alpha,beta,region,m_kind,m_value,m_attained,d_kind,d_value,"
         "d_attained,residual,diagnostics_code\n";
  int failed = 0;
  for (const auto& c : cells) {
    if (c.failed) ++failed;
    csv << format_double(c.alpha) << "," << format_double(c.beta) << ","
        << region_name(c.region) << "," << kind_str(c.m_class.kind) << ","
        << format_double(c.m_class.kind == ValueKind::Finite ? c.m_class.value
                                                             : 0.0)
        << "," << attained_str(c.m_class.attained) << ","
        << kind_str(c.d_class.kind) << ","
        << format_double(c.d_class.kind == ValueKind::Finite ? c.d_class.value
                                                             : 0.0)
        << "," << attained_str(c.d_class.attained) << ","
        << format_double(c.residual) << "," << c.diagnostics_code << "\n";
  }
  write_output(cfg.out, csv.str());

  AuditReport audit = monotonicity_audit(cells);
  json summary{{"config", config_json(cfg)},
               {"cells", cells.size()},
               {"failed_cells", failed},
               {"audit_pairs", audit.checked_pairs},
               {"audit_violations", audit.violations.size()},
               {"audit_max_violation", audit.max_violation}};
  std::cerr << summary.dump(2) << "\n";
  if (!audit.violations.empty() || failed > 0) return kExitSolver;
  return kExitOk;
}

int cmd_ground(const CommonConfig& cfg, double alpha, double beta,
               bool minimize_mode) {
  Mesh mesh(cfg.a, cfg.b, cfg.n);
  const SolverOptions opts = make_opts(cfg);
  EigenContext ctx(mesh, cfg.p, cfg.q, opts);
  const EnergyParams P(cfg.p, cfg.q, alpha, beta);
  json out{{"config", config_json(cfg)}, {"alpha", alpha}, {"beta", beta}};
  if (minimize_mode) {
    ExtendedValue m = global_min(ctx, P, opts);
    out["m"] = extended_json(m, cfg.emit_witness);
  } else {
    CurveInterpolant curve(trace_curve(ctx, 24, opts), ctx.lambda1_p,
                           ctx.lambda1_q);
    GroundStateReport g = ground_state(ctx, curve, P, opts);
    out["d"] = extended_json(g.d_value, cfg.emit_witness);
    if (g.pde_residual_u1 >= 0.0) out["pde_residual_u1"] = g.pde_residual_u1;
    if (g.pde_residual_u2 >= 0.0) out["pde_residual_u2"] = g.pde_residual_u2;
  }
  write_output(cfg.out, out.dump(2));
  return kExitOk;
}

int cmd_sweep(const CommonConfig& cfg, int variant, int steps) {
  Mesh mesh(cfg.a, cfg.b, cfg.n);
  const SolverOptions opts = make_opts(cfg);
  EigenContext ctx(mesh, cfg.p, cfg.q, opts);
  CurveInterpolant curve(trace_curve(ctx, 24, opts), ctx.lambda1_p,
                         ctx.lambda1_q);
  std::vector<std::pair<double, double>> path;
  for (int k = 5; k < 5 + steps; ++k) {
    const double gap = std::ldexp(1.0, -k);
    switch (variant) {
      case 1:
        path.emplace_back(ctx.lambda1_p - gap, ctx.beta_star + 1.0);
        break;
      case 2:
        path.emplace_back(ctx.lambda1_p - 1.0, ctx.lambda1_q + gap);
        break;
      default:
        path.emplace_back(ctx.lambda1_p + gap,
                          0.5 * (ctx.lambda1_q + ctx.beta_star));
        break;
    }
  }
  SweepReport rep = boundary_sweep(ctx, curve, path, opts);
  std::ostringstream csv;
  csv << "alpha,beta,energy,norm_p,grad_p,dist_phi_p,dist_phi_q,ok\n";
  for (const auto& pt : rep.points)
    csv << format_double(pt.alpha) << "," << format_double(pt.beta) << ","
        << format_double(pt.energy) << "," << format_double(pt.norm_p) << ","
        << format_double(pt.grad_p) << "," << format_double(pt.dist_phi_p)
        << "," << format_double(pt.dist_phi_q) << "," << (pt.ok ? 1 : 0)
        << "\n";
  write_output(cfg.out, csv.str());
  const char* trend = rep.trend == SweepTrend::DivergentToPhiP
                          ? "divergent_to_phi_p"
                          : rep.trend == SweepTrend::VanishingToPhiQ
                                ? "vanishing_to_phi_q"
                                : "bounded_convergent";
  json summary{{"config", config_json(cfg)},
               {"variant", variant},
               {"trend", trend},
               {"final_profile_distance", rep.final_profile_distance},
               {"failures", rep.failures}};
  std::cerr << summary.dump(2) << "\n";
  if (rep.failures * 5 > static_cast<int>(rep.points.size()))
    return kExitSolver;
  return kExitOk;
}

int cmd_dichotomy(const CommonConfig& cfg) {
  Mesh mesh(cfg.a, cfg.b, cfg.n);
  const SolverOptions opts = make_opts(cfg);
  EigenContext ctx(mesh, cfg.p, cfg.q, opts);
  ProbeReport rep = dichotomy_probe(ctx, opts);
  const char* verdict = rep.verdict == DichotomyVerdict::Divergent
                            ? "divergent (p<2q)"
                            : rep.verdict == DichotomyVerdict::Bounded
                                  ? "bounded (p>2q)"
                                  : "inconclusive";
  json out{{"config", config_json(cfg)},
           {"alpha", ctx.lambda1_p},
           {"beta", ctx.beta_star},
           {"epsilons", rep.epsilons},
           {"j_values", rep.j_values},
           {"slope", rep.slope},
           {"min_j", rep.min_j},
           {"verdict", verdict}};
  write_output(cfg.out, out.dump(2));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational lab for the (p,q)-Laplacian eigenvalue problem"};
  app.require_subcommand(1);

  CommonConfig cfg;
  std::vector<double> domain;
  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file (flags take precedence)");

  double r = 2.0;
  auto* eigen = app.add_subcommand("eigen", "first eigenpair of -Delta_r");
  eigen->add_option("--r", r, "exponent r");
  add_common_flags(eigen, cfg, domain);

  int samples = 24;
  auto* curvecmd =
      app.add_subcommand("curve", "trace the threshold curve beta_*(alpha)");
  curvecmd->add_option("--samples", samples, "number of alpha samples")
      ->check(CLI::Range(2, 10000));
  add_common_flags(curvecmd, cfg, domain);

  std::vector<double> alpha_range, beta_range;
  std::vector<int> grid;
  auto* phase = app.add_subcommand("phase", "classify a parameter-plane grid");
  phase->add_option("--alpha-range", alpha_range)->delimiter(',')->expected(2);
  phase->add_option("--beta-range", beta_range)->delimiter(',')->expected(2);
  phase->add_option("--grid", grid)->delimiter(',')->expected(2);
  add_common_flags(phase, cfg, domain);

  double alpha = 0.0, beta = 0.0;
  auto* ground = app.add_subcommand("ground", "least energy d(alpha,beta)");
  ground->add_option("--alpha", alpha)->required();
  ground->add_option("--beta", beta)->required();
  add_common_flags(ground, cfg, domain);

  auto* minimize =
      app.add_subcommand("minimize", "global minimum m(alpha,beta)");
  minimize->add_option("--alpha", alpha)->required();
  minimize->add_option("--beta", beta)->required();
  add_common_flags(minimize, cfg, domain);

  int variant = 1, steps = 8;
  auto* sweep = app.add_subcommand("sweep", "boundary parameter sweep");
  sweep->add_option("--variant", variant, "1,2,3: which boundary")
      ->check(CLI::Range(1, 3));
  sweep->add_option("--steps", steps)->check(CLI::Range(2, 64));
  add_common_flags(sweep, cfg, domain);

  auto* dicho = app.add_subcommand(
      "dichotomy", "boundedness probe at (lambda1(p), beta_*)");
  add_common_flags(dicho, cfg, domain);

  try {
    // config-file defaults are applied before flags are parsed again
    if (argc >= 2) {
      for (int i = 1; i < argc - 1; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
      if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw CLI::ValidationError("--config", "cannot open file");
        json j = json::parse(f);
        if (j.contains("n")) cfg.n = j["n"];
        if (j.contains("p")) cfg.p = j["p"];
        if (j.contains("q")) cfg.q = j["q"];
        if (j.contains("domain")) {
          cfg.a = j["domain"][0];
          cfg.b = j["domain"][1];
        }
        if (j.contains("tol_rel")) cfg.tol_rel = j["tol_rel"];
        if (j.contains("tol_grad")) cfg.tol_grad = j["tol_grad"];
        if (j.contains("jobs")) cfg.jobs = j["jobs"];
      }
    }
    app.parse(argc, argv);
    finalize_config(cfg, domain);
    if (eigen->parsed()) return cmd_eigen(cfg, r);
    check_pq(cfg);
    if (curvecmd->parsed()) return cmd_curve(cfg, samples);
    if (phase->parsed()) {
      if (!alpha_range.empty() && alpha_range[0] >= alpha_range[1])
        throw CLI::ValidationError("--alpha-range", "requires lo < hi");
      if (!beta_range.empty() && beta_range[0] >= beta_range[1])
        throw CLI::ValidationError("--beta-range", "requires lo < hi");
      return cmd_phase(cfg, alpha_range, beta_range, grid);
    }
    if (ground->parsed()) return cmd_ground(cfg, alpha, beta, false);
    if (minimize->parsed()) return cmd_ground(cfg, alpha, beta, true);
    if (sweep->parsed()) return cmd_sweep(cfg, variant, steps);
    if (dicho->parsed()) return cmd_dichotomy(cfg);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const NonConvergence& e) {
    std::cerr << "solver failure: " << e.what() << " (best "
              << e.best_value << ")\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
