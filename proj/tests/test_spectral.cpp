#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

#include "kinkstab/closed_forms.hpp"
#include "kinkstab/spectral.hpp"

using namespace kinkstab;

namespace {

const ProfileSet& reference() {
  static const ProfileSet p = build_profiles();
  return p;
}

}  // namespace

TEST_CASE("Fermi Golden Rule constants") {
  const FgrReport r = fgr_constants();
  CHECK(r.fgr_basic == doctest::Approx(-0.222).epsilon(5e-3 / 0.222));
  CHECK(r.fgr_modified == doctest::Approx(-0.218).epsilon(5e-3 / 0.218));
  CHECK(r.psi_f_imk == doctest::Approx(-0.327).epsilon(5e-3 / 0.327));
  CHECK(r.a == doctest::Approx(0.687271).epsilon(1e-4 / 0.687271));
  CHECK(r.err_basic < 1e-6);
  CHECK(r.err_modified < 1e-6);
  CHECK(r.err_psi_f_imk < 1e-6);
  // the modified pairing removes the Y₁ component, so it stays close to the basic one
  CHECK(std::abs(r.fgr_modified - r.fgr_basic) < 0.01);
}

TEST_CASE("Fermi Golden Rule pairing vanishes for an even substitute") {
  // Im k is odd; pairing with an even function is zero on the symmetric grid.
  const Grid g(60.0, 24001);
  const auto k = sample_complex(FunctionId::jost_k, g);
  GridFunction imk(g, Parity::odd);
  for (std::size_t j = 0; j < g.size(); ++j) imk[j] = k[j].imag();
  const auto y1 = sample(FunctionId::Y1, g);
  const auto even = sample(FunctionId::Y0, g) * y1 * y1;
  CHECK(std::abs(inner(imk, even, QuadratureRule::simpson)) < 1e-15);
}

TEST_CASE("potential domination") {
  const DominationReport d = check_potential_domination();
  CHECK(d.certified);
  CHECK(d.margin > 0.0);
  CHECK(d.max_ratio < 1.0);
  CHECK(d.tail_rate > 0.0);
  CHECK(d.tail_ratio_bound < 1.0);
  CHECK(evaluate_real(FunctionId::V2, 0.0) == 0.0);

  // independent maximizer of V₂ on x > 0
  const auto neg = [](double x) { return -evaluate_real(FunctionId::V2, x); };
  const auto [xm, vm] = boost::math::tools::brent_find_minima(neg, 0.01, 10.0, 40);
  CHECK(d.v2_argmax == doctest::Approx(xm).epsilon(2e-3));
  CHECK(d.v2_max == doctest::Approx(-vm).epsilon(1e-6));

  SUBCASE("a coarser sweep reaches the same verdict") {
    const DominationReport c = check_potential_domination(60.0, 1e-2);
    CHECK(c.certified);
    CHECK(c.margin >= d.margin - 1e-6);
  }
}

TEST_CASE("minimum over nu") {
  const MinOverNu m = min_over_nu();
  CHECK(m.min_value == doctest::Approx(0.04).epsilon(5e-3 / 0.04));
  CHECK(m.min_value < 1.0 / 14.0);
  CHECK(m.min_value <= m.int_A2);
  CHECK(m.int_B2 > 0.0);
  // the minimizer of a quadratic in ν leaves nothing to gain on either side
  for (double dn : {-1e-3, 1e-3}) {
    const Grid g(60.0, 24001);
    const auto A = antiderivative_even(sample(FunctionId::tildeY1, g));
    const auto B = antiderivative_even(sample(FunctionId::Z1, g));
    const auto r = A - (m.nu_star + dn) * B;
    CHECK(inner(r, r, QuadratureRule::simpson) >= m.min_value - 1e-12);
  }
  SUBCASE("refinement") {
    const MinOverNu c = min_over_nu(Grid(60.0, 12001));
    CHECK(refinement_change(c.nu_star, m.nu_star) < 1e-4);
    CHECK(refinement_change(c.min_value, m.min_value) < 1e-3);
  }
}

TEST_CASE("coercivity of B sharp") {
  const CoercivityReport b = coercivity_B_sharp();
  CHECK(b.constrained_min > 0.0);
  CHECK(b.unconstrained_min <= b.constrained_min);
  CHECK(b.half_width == 30.0);
  CHECK(b.spacing == 0.1);
  CHECK_FALSE(b.form_id.empty());
}

TEST_CASE("coercivity of D sharp") {
  const ProfileSet& p = reference();
  const DSharpReport d = coercivity_D_sharp(p.a, p.b, p.f_g, p.hsharp_h);
  const CoercivityReport b = coercivity_B_sharp();
  CHECK(d.joint.constrained_min > 0.0);
  CHECK(d.reduced_positive);
  CHECK(d.det_2x2 == doctest::Approx(p.f_g * p.hsharp_h - 0.25 * p.hsharp_h * p.hsharp_h));
  CHECK(d.det_2x2 > 0.0);
  CHECK(d.min_eig_2x2 > 0.0);
  CHECK(d.alpha0_slice_min == doctest::Approx(b.constrained_min).epsilon(1e-8));
  CHECK(d.joint.constrained_min <= d.alpha0_slice_min + 1e-12);
  CHECK(std::abs(d.hsharp_h_discrete - p.hsharp_h) < 0.2 * p.hsharp_h);

  SUBCASE("golden constants give a positive reduced determinant") {
    const double fg = 0.0163, hh = 0.0147;
    CHECK(fg * hh - 0.25 * hh * hh > 0.0);
  }
  SUBCASE("an indefinite reduced form is rejected") {
    CHECK_THROWS_AS(coercivity_D_sharp(p.a, p.b, 0.001, p.hsharp_h), NumericalError);
  }
}

TEST_CASE("energy lower bound") {
  const CoercivityReport e = energy_lower_bound_check();
  CHECK(e.constrained_min >= 3.0 / 7.0 - 0.01);

  SUBCASE("quotient of Y1 against quadrature") {
    using boost::math::quadrature::gauss_kronrod;
    const double inf = std::numeric_limits<double>::infinity();
    const double yp2 = gauss_kronrod<double, 61>::integrate(
        [](double x) { return cf::internal_mode_prime(x) * cf::internal_mode_prime(x); }, -inf, inf, 15,
        1e-14);
    const Grid g(30.0, 6001);
    const auto y1 = sample(FunctionId::Y1, g);
    CHECK(energy_quotient(y1) == doctest::Approx(1.5 / (1.0 + yp2)).epsilon(1e-6));
    CHECK(energy_quotient(-3.0 * y1) == doctest::Approx(energy_quotient(y1)).epsilon(1e-12));
    CHECK(energy_quotient(y1) >= e.constrained_min - 1e-9);
  }
}
