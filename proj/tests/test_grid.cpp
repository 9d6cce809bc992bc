#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "kinkstab/closed_forms.hpp"
#include "kinkstab/grid.hpp"

using namespace kinkstab;
using boost::math::quadrature::gauss_kronrod;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double oracle(const std::function<double(double)>& f, double a, double b) {
  return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}
}  // namespace

TEST_CASE("grid layout") {
  const Grid g(10.0, 201);
  CHECK(g.spacing() == doctest::Approx(0.1));
  CHECK(g.x(g.center()) == 0.0);
  CHECK(g.x(0) == -10.0);
  CHECK(g.x(200) == doctest::Approx(10.0));
  CHECK_THROWS_AS(Grid(10.0, 200), std::invalid_argument);
  CHECK_THROWS_AS(Grid(-1.0, 201), std::invalid_argument);
  CHECK(Grid::with_spacing(10.0, 0.05).size() == 401);
}

TEST_CASE("grid functions on different grids do not mix") {
  GridFunction a(Grid(10.0, 201)), b(Grid(10.0, 401));
  CHECK_THROWS_AS(a + b, GridMismatch);
  CHECK_THROWS_AS(inner(a, b), GridMismatch);
}

TEST_CASE("inner of odd and even vanishes on the symmetric grid") {
  const Grid g(20.0, 2001);
  const auto odd = sample(FunctionId::Y1, g);
  const auto even = sample(FunctionId::Y0, g);
  CHECK(std::abs(inner(odd, even)) < 1e-16);
  CHECK(std::abs(inner(odd, even, QuadratureRule::simpson)) < 1e-16);
}

TEST_CASE("internal mode is normalized") {
  const Grid g(40.0, 8001);
  const auto y1 = sample(FunctionId::Y1, g);
  CHECK(inner(y1, y1, QuadratureRule::simpson) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Fermi Golden Rule pairing reaches the reference value") {
  const Grid g(60.0, 24001);
  const auto k = sample_complex(FunctionId::jost_k, g);
  GridFunction imk(g, Parity::odd);
  for (std::size_t j = 0; j < g.size(); ++j) imk[j] = k[j].imag();
  const auto h = sample(FunctionId::H, g);
  const auto y1 = sample(FunctionId::Y1, g);
  CHECK(inner(imk, h * y1 * y1, QuadratureRule::simpson) == doctest::Approx(-0.222).epsilon(5e-3 / 0.222));
}

TEST_CASE("Simpson is exact for cubics, trapezoid is not") {
  const Grid g(1.0, 11);
  auto f = GridFunction::sample(g, [](double x) { return x * x + x * x * x; });
  const GridFunction one = GridFunction::sample(g, [](double) { return 1.0; });
  CHECK(inner(f, one, QuadratureRule::simpson) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(inner(f, one) - 2.0 / 3.0) > 1e-3);
}

TEST_CASE("derivative stencils converge at their nominal order") {
  auto err = [](std::size_t n, StencilOrder o) {
    const Grid g(3.0, n);
    const auto f = GridFunction::sample(g, [](double x) { return std::sin(x) * std::exp(-0.1 * x * x); });
    const auto d = derivative(f, o);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double x = g.x(j);
      const double exact = std::exp(-0.1 * x * x) * (std::cos(x) - 0.2 * x * std::sin(x));
      worst = std::max(worst, std::abs(d[j] - exact));
    }
    return worst;
  };
  CHECK(std::log2(err(121, StencilOrder::second) / err(241, StencilOrder::second)) > 1.9);
  CHECK(std::log2(err(121, StencilOrder::fourth) / err(241, StencilOrder::fourth)) > 3.8);
}

TEST_CASE("second derivative uses zero ghost values") {
  const Grid g(2.0, 5);
  GridFunction f(g);
  f[4] = 1.0;
  const auto d2 = second_derivative(f, StencilOrder::second);
  CHECK(d2[4] == doctest::Approx(-2.0));  // (f3 - 2 f4 + 0)/h², h = 1
  CHECK(d2[3] == doctest::Approx(1.0));
}

TEST_CASE("weighted norms") {
  const Grid g(30.0, 6001);
  SUBCASE("zero") {
    const GridFunction z(g);
    const auto n = weighted_norms(z, z);
    CHECK(n.h1_omega == 0.0);
    CHECK(n.l2_omega == 0.0);
  }
  SUBCASE("homogeneous of degree two") {
    const auto y1 = sample(FunctionId::Y1, g);
    const auto y0 = sample(FunctionId::Y0, g);
    const auto n1 = weighted_norms(y1, y0);
    const auto n3 = weighted_norms(3.0 * y1, 3.0 * y0);
    CHECK(n3.h1_omega == doctest::Approx(9.0 * n1.h1_omega).epsilon(1e-14));
    CHECK(n3.l2_omega == doctest::Approx(9.0 * n1.l2_omega).epsilon(1e-14));
  }
  SUBCASE("Y1 against adaptive quadrature of the closed forms") {
    const auto n = weighted_norms(sample(FunctionId::Y1, g), GridFunction(g));
    const double ref = oracle(
        [](double x) {
          const double y = cf::internal_mode(x), yp = cf::internal_mode_prime(x);
          return (yp * yp + y * y) * local_weight(x);
        },
        -kInf, kInf);
    CHECK(n.h1_omega == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("even antiderivative") {
  const Grid g(60.0, 12001);
  SUBCASE("of the odd bump tildeY1") {
    const auto u = antiderivative_even(sample(FunctionId::tildeY1, g));
    CHECK(std::abs(u[0]) < 1e-8);
    CHECK(std::abs(u[g.size() - 1]) < 1e-8);
    CHECK(u.parity_defect(Parity::even) < 1e-10);
    double lo = 0.0;
    for (double v : u.values()) lo = std::min(lo, v);
    CHECK(u[g.center()] == doctest::Approx(lo));
  }
  SUBCASE("of Z1 against adaptive quadrature") {
    const auto u = antiderivative_even(sample(FunctionId::Z1, g));
    for (double x : {0.0, 1.0, 3.5, 10.0}) {
      const auto j = static_cast<std::size_t>(std::lround((x + 60.0) / g.spacing()));
      const double ref = -oracle([](double s) { return cf::z1(s); }, x, kInf);
      CHECK(u[j] == doctest::Approx(ref).epsilon(2e-5));  // cumulative trapezoid, h = 0.01
    }
  }
  SUBCASE("of zero") {
    const auto u = antiderivative_even(GridFunction(g, Parity::odd));
    for (double v : u.values()) CHECK(v == 0.0);
  }
  SUBCASE("of a non-decaying input") {
    const auto one = GridFunction::sample(g, [](double x) { return x > 0 ? 1.0 : 0.0; });
    CHECK_THROWS_AS(antiderivative_even(one), NumericalError);
  }
}

TEST_CASE("parity projection") {
  const Grid g(5.0, 101);
  auto f = GridFunction::sample(g, [](double x) { return std::exp(x); });
  CHECK(f.parity_defect(Parity::odd) > 1.0);
  f.symmetrize(Parity::odd);
  CHECK(f.parity_defect(Parity::odd) == 0.0);
  CHECK(f[g.center()] == 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(f[j] == doctest::Approx(std::sinh(g.x(j))));
}

TEST_CASE("interpolation and resampling") {
  const Grid g(10.0, 2001);
  const auto f = sample(FunctionId::Y1, g);
  for (double x : {-3.21, 0.017, 2.5, 9.999}) {
    CHECK(std::abs(interpolate(f, x) - cf::internal_mode(x)) < 1e-6);
  }
  CHECK(interpolate(f, 11.0) == 0.0);
  const auto r = resample(f, Grid(20.0, 401));
  CHECK(r[0] == 0.0);
  CHECK(r[200] == doctest::Approx(0.0));
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, -2.6278523425711633, 1e-300, 12345.678}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  std::ostringstream os;
  write_csv(os, GridFunction(Grid(1.0, 3)));
  CHECK(os.str() == "x,value\n-1,0\n0,0\n1,0\n");
}
