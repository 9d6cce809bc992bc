#include <doctest.h>

#include <cmath>

#include "kinkstab/ode_profiles.hpp"

using namespace kinkstab;

namespace {

const ProfileSet& reference() {
  static const ProfileSet p = build_profiles();
  return p;
}

GridFunction imag_jost(const Grid& g) {
  const auto k = sample_complex(FunctionId::jost_k, g);
  GridFunction out(g, Parity::odd);
  for (std::size_t j = 0; j < g.size(); ++j) out[j] = k[j].imag();
  return out;
}

double max_interior(const GridFunction& f, double radius) {
  double worst = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (std::abs(f.grid().x(j)) <= radius) worst = std::max(worst, std::abs(f[j]));
  }
  return worst;
}

}  // namespace

TEST_CASE("variation of parameters") {
  SUBCASE("zero source") {
    const Grid g(30.0, 3001);
    const auto G = variation_of_parameters(GridFunction(g, Parity::odd));
    for (double v : G.values()) CHECK(v == 0.0);
  }
  SUBCASE("solves (-L + 6)G = F with a second-order residual, keeps parity") {
    auto residual = [](std::size_t n) {
      const Grid g(30.0, n);
      const auto F = sample(FunctionId::Y1, g) * sample(FunctionId::Y0, g);
      const auto G = variation_of_parameters(F);
      CHECK(G.parity() == Parity::odd);
      CHECK(G.parity_defect(Parity::odd) < 1e-12);
      return max_interior(6.0 * G - apply_L(G) - F, 20.0);
    };
    const double e1 = residual(3001), e2 = residual(6001);
    CHECK(e1 < 1e-4);
    CHECK(std::log2(e1 / e2) > 1.8);
  }
}

TEST_CASE("coefficient a") {
  const Grid g(60.0, 24001);
  const ACoefficient ac = compute_a(g);
  CHECK(ac.a == doctest::Approx(0.687271).epsilon(1e-4 / 0.687271));
  CHECK(ac.denominator == doctest::Approx(-0.327).epsilon(5e-3 / 0.327));
  // defining property: the source of the g equation is orthogonal to Im k
  const double defect = inner(g_source(g, ac.a), imag_jost(g), QuadratureRule::simpson);
  CHECK(std::abs(defect) < 1e-8 * std::abs(ac.denominator));
}

TEST_CASE("profile g") {
  const ProfileSet& p = reference();
  CHECK(p.g_prime0 == doctest::Approx(-0.333).epsilon(5e-3 / 0.333));
  CHECK(p.f_g == doctest::Approx(0.0163).epsilon(5e-4 / 0.0163));
  CHECK(p.f_g > 0.0);
  CHECK(p.g.parity_defect(Parity::odd) < 1e-12);
  CHECK(std::abs(p.g[0]) < 1e-8);
  // Pairing (−𝓛+6)g = −rhs with Y₁ gives (6 − 3/2)⟨g,Y₁⟩ = −⟨rhs,Y₁⟩.
  const auto y1 = sample(FunctionId::Y1, p.grid);
  const double gy = inner(p.g, y1, QuadratureRule::simpson);
  const double ry = inner(g_source(p.grid, p.a), y1, QuadratureRule::simpson);
  CHECK(gy == doctest::Approx(-ry / 4.5).epsilon(1e-4));
}

TEST_CASE("g loses decay when a is perturbed") {
  const Grid g(60.0, 24001);
  const double a = compute_a(g).a;
  CHECK_NOTHROW(solve_g(g, a));
  try {
    solve_g(g, a + 0.1);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).rfind("g_schwartz_decay", 0) == 0);
  }
}

TEST_CASE("profile q") {
  const ProfileSet& p = reference();
  const auto f = sample(FunctionId::f, p.grid);
  CHECK(max_interior(apply_L(p.q) - f, 55.0) < 1e-6);
  CHECK(std::abs(p.q[p.grid.size() - 1]) < 1e-8);
  CHECK(std::abs(inner(p.q, sample(FunctionId::Y1, p.grid), QuadratureRule::simpson)) < 1e-8);
  CHECK(p.q.parity_defect(Parity::odd) < 1e-12);

  SUBCASE("residual is second order in h") {
    auto res = [](std::size_t n) {
      const Grid g(30.0, n);
      const auto q = solve_q(g).u;
      return max_interior(apply_L(q, StencilOrder::second) - sample(FunctionId::f, g), 25.0);
    };
    CHECK(std::log2(res(3001) / res(6001)) > 1.9);
  }
}

TEST_CASE("bounded sharp solutions reproduce the shooting constants") {
  const ProfileSet& p = reference();
  CHECK(p.sharp_potential == SharpPotential::v2_only);
  CHECK(p.z1sharp_prime0 == doctest::Approx(-0.4376).epsilon(5e-3 / 0.4376));
  CHECK(p.z1_z1sharp == doctest::Approx(-2.63).epsilon(0.05 / 2.63));
  CHECK(p.hsharp_prime0 == doctest::Approx(0.0249).epsilon(5e-3 / 0.0249));
  CHECK(p.hsharp_h == doctest::Approx(0.0147).epsilon(5e-4 / 0.0147));
  CHECK(0.0 < p.hsharp_h);
  CHECK(p.hsharp_h < 4.0 * p.f_g);

  SUBCASE("boundedness: slope vanishes at the far end") {
    const std::size_t n = p.grid.size();
    const double h = p.grid.spacing();
    CHECK(std::abs((p.z1sharp[n - 1] - p.z1sharp[n - 2]) / h) < 1e-3);
    CHECK(std::abs((p.hsharp[n - 1] - p.hsharp[n - 2]) / h) < 1e-3);
  }
  SUBCASE("residual of (-d² - V)u = rhs") {
    GridFunction v = GridFunction::sample(p.grid, [](double x) {
      return sharp_potential(SharpPotential::v2_only, x);
    });
    const auto z1 = sample(FunctionId::Z1, p.grid);
    const auto r = -1.0 * second_derivative(p.z1sharp) - v * p.z1sharp - z1;
    CHECK(max_interior(r, 50.0) < 1e-5);
  }
}

TEST_CASE("coefficient b and the function h") {
  const ProfileSet& p = reference();
  const BCoefficient bc = compute_b(p.a, p.z1sharp);
  CHECK(bc.b == doctest::Approx(p.b));
  CHECK(std::abs(bc.h_z1sharp) < 1e-8 * std::abs(bc.z1_z1sharp));
  CHECK(p.h_fn.parity_defect(Parity::odd) < 1e-10);
  CHECK(std::isfinite(p.b));

  SUBCASE("b is stable under refinement") {
    ProfileOptions coarse;
    coarse.grid = Grid(60.0, 12001);
    const ProfileSet pc = build_profiles(coarse);
    CHECK(std::abs(pc.b - p.b) / std::abs(p.b) < 1e-4);
  }
}

TEST_CASE("full-V sharp operator is selectable") {
  ProfileOptions o;
  o.sharp_potential = SharpPotential::full_v;
  const ProfileSet p = build_profiles(o);
  CHECK(p.sharp_potential == SharpPotential::full_v);
  CHECK(p.z1_z1sharp < 0.0);
  CHECK(0.0 < p.hsharp_h);
  CHECK(p.hsharp_h < 4.0 * p.f_g);
  CHECK(sharp_potential(SharpPotential::full_v, 1.0) >
        sharp_potential(SharpPotential::v2_only, 1.0));
}

TEST_CASE("decaying profiles move to another grid") {
  const ProfileSet& p = reference();
  const Grid target(200.0, 8001);
  const DecayingProfiles d = resample_decaying(p, target);
  CHECK(d.q.grid() == target);
  CHECK(d.q[0] == 0.0);
  const std::size_t j = static_cast<std::size_t>(std::lround((1.0 + 200.0) / target.spacing()));
  CHECK(d.g[j] == doctest::Approx(interpolate(p.g, 1.0)).epsilon(1e-10));
}
