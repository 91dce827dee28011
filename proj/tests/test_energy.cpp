#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nehari/analytic.hpp"
#include "nehari/eigen.hpp"
#include "nehari/energy.hpp"

using namespace nehari;

namespace {

Field random_field(const Mesh& m, std::mt19937& rng, double amp = 1.0) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  Field u(m);
  for (int i = 0; i < m.n; ++i) u[i] = dist(rng);
  return u;
}

}  // namespace

TEST_CASE("parameter validation", "[energy]") {
  REQUIRE_THROWS_AS(EnergyParams(2.0, 3.0, 0.0, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(EnergyParams(2.0, 1.0, 0.0, 0.0), std::invalid_argument);
  REQUIRE_NOTHROW(EnergyParams(3.0, 2.0, -5.0, 100.0));
}

TEST_CASE("degenerate power evaluation at zero", "[energy]") {
  REQUIRE(signed_pow(0.0, 1.5) == 0.0);
  REQUIRE(signed_pow(2.0, 3.0) == Catch::Approx(4.0));
  REQUIRE(signed_pow(-2.0, 3.0) == Catch::Approx(-4.0));
}

TEST_CASE("energy splits into its two constituents", "[energy]") {
  Mesh m(0.0, 1.0, 63);
  EnergyParams P(3.0, 2.0, 5.0, 7.0);
  std::mt19937 rng(42);
  for (int rep = 0; rep < 10; ++rep) {
    Field u = random_field(m, rng);
    REQUIRE(energy(u, P) ==
            Catch::Approx(h_alpha(u, P) / P.p + g_beta(u, P) / P.q)
                .epsilon(1e-12));
    REQUIRE(energy(u, P) == Catch::Approx(energy(-1.0 * u, P)).epsilon(1e-12));
  }
}

TEST_CASE("energy gradient matches central differences", "[energy]") {
  Mesh m(0.0, 1.0, 31);
  EnergyParams P(3.0, 2.0, 4.0, 6.0);
  std::mt19937 rng(99);
  for (int rep = 0; rep < 10; ++rep) {
    Field u = random_field(m, rng);
    for (int i = 0; i < m.n; ++i) u[i] += 0.5;  // keep nodes away from 0
    const Field g = energy_gradient(u, P);
    std::uniform_int_distribution<int> pick(0, m.n - 1);
    for (int c = 0; c < 5; ++c) {
      const int i = pick(rng);
      const double d = 1e-6;
      Field up = u, um = u;
      up[i] += d;
      um[i] -= d;
      const double fd = (energy(up, P) - energy(um, P)) / (2.0 * d);
      REQUIRE(g[i] == Catch::Approx(fd).epsilon(1e-5).margin(1e-10));
    }
  }
}

TEST_CASE("eigenfunction solves the single-operator equation", "[energy]") {
  Mesh m(0.0, 1.0, 63);
  const double r = 3.0;
  EigenPair pair = solve_first_eigen(m, r);
  Field res = operator_residual(pair.phi, r, pair.lambda1);
  double rn = 0.0;
  for (int i = 0; i < m.n; ++i) rn += res[i] * res[i];
  REQUIRE(std::sqrt(rn) < 1e-4);
}

TEST_CASE("ray projection lands on the Nehari set", "[energy]") {
  Mesh m(0.0, 1.0, 63);
  std::mt19937 rng(2024);
  EigenContext ctx(m, 3.0, 2.0);
  EnergyParams P(3.0, 2.0, ctx.lambda1_p - 0.5, ctx.lambda1_q + 0.5);
  std::uniform_real_distribution<double> amp(-0.1, 0.1);
  int tested = 0;
  for (int rep = 0; rep < 400 && tested < 30; ++rep) {
    // smooth low-frequency perturbations keep the gradient energy small
    // enough that the field stays inside the sign cone
    Field u = ctx.pair_q.phi;
    const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
    for (int i = 0; i < m.n; ++i) {
      const double x = m.node(i);
      u[i] *= 1.0 + a1 * std::sin(kPi * x) + a2 * std::sin(2.0 * kPi * x) +
              a3 * std::sin(3.0 * kPi * x);
    }
    double H = h_alpha(u, P), G = g_beta(u, P);
    if (!(H * G < 0.0)) continue;
    ++tested;
    const double t = t_projection(u, P);
    Field w = u;
    w *= t;
    const double scale =
        std::fabs(h_alpha(w, P)) + std::fabs(g_beta(w, P)) + 1e-300;
    REQUIRE(std::fabs(nehari_residual(w, P)) / scale < 1e-10);

    // Nehari identity: E = (p-q)/(pq) * G_beta at the projected point
    const double c = (P.p - P.q) / (P.p * P.q);
    REQUIRE(std::fabs(energy(w, P) - c * g_beta(w, P)) <=
            1e-8 * (std::fabs(energy(w, P)) + std::fabs(g_beta(w, P)) +
                    1e-300));

    // fibered value agrees with the energy at the projection
    REQUIRE(fibered_j(u, P) == Catch::Approx(energy(w, P)).epsilon(1e-10));
    // 0-homogeneity
    REQUIRE(fibered_j(3.0 * u, P) ==
            Catch::Approx(fibered_j(u, P)).epsilon(1e-10));
  }
  REQUIRE(tested == 30);
}

TEST_CASE("ray projection matches a dense ray scan", "[energy]") {
  Mesh m(0.0, 1.0, 63);
  EigenContext ctx(m, 3.0, 2.0);
  EnergyParams P(3.0, 2.0, ctx.lambda1_p - 0.5, ctx.lambda1_q + 0.5);
  Field u = ctx.pair_q.phi;  // BMinus representative
  REQUIRE(sign_class(u, P) == SignClass::BMinus);
  const double t_star = t_projection(u, P);
  // scan E(t u) on a fine geometric grid around t_star
  const int grid = 4001;
  double best_t = 0.0, best_e = 1e300;
  for (int k = 0; k < grid; ++k) {
    const double t = t_star * std::pow(4.0, (k - grid / 2) / double(grid / 2));
    Field w = u;
    w *= t;
    const double e = energy(w, P);
    if (e < best_e) {
      best_e = e;
      best_t = t;
    }
  }
  REQUIRE(std::fabs(best_t - t_star) / t_star < 2e-3);
}

TEST_CASE("sign classification and projection errors", "[energy]") {
  Mesh m(0.0, 1.0, 63);
  EigenContext ctx(m, 3.0, 2.0);
  // alpha, beta below both eigenvalues: H > 0 and G > 0 for every field
  EnergyParams P(3.0, 2.0, ctx.lambda1_p - 1.0, ctx.lambda1_q - 1.0);
  Field u = bump(m);
  REQUIRE(sign_class(u, P) == SignClass::Indefinite);
  REQUIRE_THROWS_AS(t_projection(u, P), SignError);
  REQUIRE_THROWS_AS(fibered_j(u, P), SignError);

  EnergyParams Pm(3.0, 2.0, ctx.lambda1_p - 0.5, ctx.lambda1_q + 0.5);
  REQUIRE(sign_class(ctx.pair_q.phi, Pm) == SignClass::BMinus);
  EnergyParams Pp(3.0, 2.0, ctx.alpha_star + 1.0, ctx.lambda1_q - 0.5);
  REQUIRE(sign_class(ctx.pair_q.phi, Pp) == SignClass::BPlus);

  Field z(m);
  REQUIRE_THROWS_AS(sign_class(z, P), std::invalid_argument);
  REQUIRE_THROWS_AS(nehari_residual(z, P), std::invalid_argument);
}
