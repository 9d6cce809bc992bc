#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kinkstab/diagnostics.hpp"

using namespace kinkstab;

namespace {

const ProfileSet& reference() {
  static const ProfileSet p = build_profiles();
  return p;
}

const DiagnosticProfiles& dprof() {
  static const DiagnosticProfiles d = prepare_diagnostics(reference(), Grid(40.0, 4001));
  return d;
}

DiagnosticsRecord synthetic(double t, double z, double H) {
  DiagnosticsRecord r{};
  r.t = t;
  r.mode = ModeState::from(z, 0.0);
  r.H_loc = H;
  return r;
}

}  // namespace

TEST_CASE("mode state") {
  for (auto [z1, z2] : {std::pair{0.3, -0.7}, std::pair{1e-3, 2e-3}, std::pair{0.0, 0.0}}) {
    const ModeState m = ModeState::from(z1, z2);
    CHECK(m.alpha * m.alpha + m.beta * m.beta == doctest::Approx(m.z_sq * m.z_sq).epsilon(1e-14));
    CHECK(m.gamma == doctest::Approx(m.alpha * m.beta));
  }
}

TEST_CASE("decomposition") {
  const DiagnosticProfiles& p = dprof();
  const double mu = std::sqrt(1.5);
  SUBCASE("pure internal mode") {
    const FieldState s{p.y1, GridFunction(p.grid, Parity::odd), 0.0};
    const Decomposition d = decompose(s, p);
    CHECK(d.mode.z1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.mode.z2 == 0.0);
    for (std::size_t j = 0; j < p.grid.size(); ++j) {
      CHECK(std::abs(d.u1[j]) < 1e-14);
      CHECK(d.v1[j] == doctest::Approx(p.q[j]).epsilon(1e-12));
    }
  }
  SUBCASE("orthogonality and reconstruction") {
    const auto w1 = 0.02 * p.y1 + 0.01 * sample(FunctionId::f, p.grid);
    const auto w2 = -0.03 * p.y1 + 0.05 * p.q;  // q is orthogonal to Y1
    const FieldState s{w1, w2, 0.0};
    const Decomposition d = decompose(s, p);
    CHECK(std::abs(inner(d.u1, p.y1)) < 1e-12);
    CHECK(std::abs(inner(d.u2, p.y1)) < 1e-12);
    const auto r1 = d.u1 + d.mode.z1 * p.y1 - w1;
    const auto r2 = d.u2 + (mu * d.mode.z2) * p.y1 - w2;
    CHECK(std::sqrt(inner(r1, r1)) < 1e-12);
    CHECK(std::sqrt(inner(r2, r2)) < 1e-12);
    CHECK(d.mode.z2 == doctest::Approx(-0.03 / mu).epsilon(1e-6));
  }
  SUBCASE("identity decomposition without a mode") {
    const DiagnosticProfiles id = prepare_identity_diagnostics(p.grid);
    const FieldState s{p.y1, p.y1, 0.0};
    const Decomposition d = decompose(s, id);
    CHECK(d.mode.z_sq == 0.0);
    CHECK(d.v1[100] == p.y1[100]);
  }
  SUBCASE("grid mismatch") {
    const FieldState s{GridFunction(Grid(40.0, 801)), GridFunction(Grid(40.0, 801)), 0.0};
    CHECK_THROWS_AS(decompose(s, p), GridMismatch);
  }
}

TEST_CASE("virial functionals") {
  const DiagnosticProfiles& p = dprof();
  const GridFunction zero(p.grid, Parity::odd);
  SUBCASE("vanish on zero") {
    const VirialValues v = virial_functionals(zero, zero, ModeState{}, p, 0.1, 0.005);
    CHECK(v.I == 0.0);
    CHECK(v.J == 0.0);
    CHECK(v.K == 0.0);
    CHECK(v.H_loc == 0.0);
  }
  SUBCASE("I(w, w) integrates to zero by parts") {
    const auto w = sample(FunctionId::f, p.grid);
    CHECK(std::abs(virial_functionals(w, w, ModeState{}, p, 0.0, 0.0).I) < 1e-6);
  }
  SUBCASE("H_loc against quadrature") {
    using boost::math::quadrature::gauss_kronrod;
    const double inf = std::numeric_limits<double>::infinity();
    const double ref = gauss_kronrod<double, 61>::integrate(
        [](double x) {
          const double y = cf::internal_mode(x), yp = cf::internal_mode_prime(x);
          const double y0 = cf::zero_mode(x);
          return (yp * yp + 2.0 * y * y + y0 * y0) * local_weight(x);
        },
        -inf, inf, 15, 1e-13);
    const auto y0 = sample(FunctionId::Y0, p.grid);
    CHECK(virial_functionals(p.y1, y0, ModeState{}, p, 0.0, 0.0).H_loc == doctest::Approx(ref).epsilon(1e-5));
  }
  SUBCASE("K combines its parts") {
    const auto v1 = 0.01 * sample(FunctionId::f, p.grid);
    const auto v2 = 0.02 * p.g;
    const ModeState m = ModeState::from(0.05, 0.02);
    const double kappa0 = 0.04, sigma = 0.002;
    const VirialValues v = virial_functionals(v1, v2, m, p, kappa0, sigma);
    const double mu = std::sqrt(1.5);
    const double J = m.alpha * inner(v2, p.g) - 2.0 * mu * m.beta * inner(v1, p.g);
    CHECK(v.J == doctest::Approx(J).epsilon(1e-12));
    CHECK(v.K == doctest::Approx(kappa0 / (4.0 * mu) * m.gamma - v.I - v.J + 2.0 * sigma * v.cross));
  }
}

TEST_CASE("period detection") {
  const double P = 2.0 * std::numbers::pi / 0.9, dt = 0.04;
  std::vector<double> c, harmonic, flat(500, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double t = i * dt;
    c.push_back(3.0 + std::cos(2.0 * std::numbers::pi * t / P));
    // a strong second harmonic must not halve the period
    harmonic.push_back(std::cos(2.0 * std::numbers::pi * t / P) + 0.6 * std::cos(4.0 * std::numbers::pi * t / P));
  }
  const auto p1 = detect_period(c, dt);
  REQUIRE(p1.has_value());
  CHECK(*p1 == doctest::Approx(P).epsilon(1e-3));
  const auto p2 = detect_period(harmonic, dt);
  REQUIRE(p2.has_value());
  CHECK(*p2 == doctest::Approx(P).epsilon(1e-3));
  CHECK_FALSE(detect_period(flat, dt).has_value());
}

TEST_CASE("verdicts on synthetic series") {
  DiagnosticsSeries decaying, steady, zero;
  for (int i = 0; i <= 1000; ++i) {
    const double t = 0.2 * i;
    decaying.push_back(synthetic(t, 0.05 * std::exp(-0.02 * t), 1e-3 * std::exp(-0.04 * t)));
    steady.push_back(synthetic(t, 0.05, 1.0 + 0.3 * std::cos(0.9 * t)));
    zero.push_back(synthetic(t, 0.0, 0.0));
  }
  CHECK(decay_verdict(decaying).verdict == Verdict::decaying);
  const VerdictReport s = decay_verdict(steady);
  CHECK(s.verdict == Verdict::non_decaying);
  REQUIRE(s.period.has_value());
  CHECK(*s.period == doctest::Approx(2.0 * std::numbers::pi / 0.9).epsilon(1e-2));
  CHECK(decay_verdict(zero).verdict == Verdict::decaying);
  CHECK_THROWS_AS(decay_verdict(DiagnosticsSeries(zero.begin(), zero.begin() + 5)), std::invalid_argument);
  CHECK(std::string(to_string(Verdict::inconclusive)) == "inconclusive");
}

TEST_CASE("monitors") {
  DiagnosticsSeries zero;
  for (int i = 0; i < 100; ++i) zero.push_back(synthetic(0.1 * i, 0.0, 0.0));
  const MonitorReport m = inequality_monitors(zero, 0.0, 0.04, 10.0);
  CHECK(m.c_gamma.C == 0.0);
  CHECK(m.c_virial.C == 0.0);
  CHECK(m.c_cross.C == 0.0);
  CHECK(m.partial_integral_t.size() == 4);

  CHECK_THROWS_AS(inequality_monitors(DiagnosticsSeries(zero.begin(), zero.begin() + 4), 0.0, 0.04, 10.0),
                  std::invalid_argument);
  DiagnosticsSeries uneven = zero;
  uneven[50].t += 0.05;
  CHECK_THROWS_AS(inequality_monitors(uneven, 0.0, 0.04, 10.0), std::invalid_argument);
}

TEST_CASE("csv layout") {
  std::ostringstream os;
  write_diagnostics_csv(os, {synthetic(0.5, 0.1, 2.0)});
  const std::string text = os.str();
  CHECK(text.rfind("t,z1,z2,alpha,beta,gamma,I,J,K,H_loc,h1w_v1,l2w_v2,E_pert,", 0) == 0);
  CHECK(text.find("\n0.5,0.1,0,0.01") != std::string::npos);
}

TEST_CASE("small linear oscillation keeps |z| constant") {
  SimConfig c;
  c.grid = Grid(40.0, 4001);
  c.dt = 0.01;
  c.T = 30.0;
  c.boundary = Boundary::dirichlet;
  c.initial.amplitude = 1e-6;
  c.output_stride = 10;
  const DiagnosticProfiles& p = dprof();
  DiagnosticsSeries s;
  run(c, [&](const FieldState& st, const EnergyLedger& e) { s.push_back(make_record(st, e, p, 0.04, 0.002)); });
  double lo = INFINITY, hi = 0.0;
  for (const auto& r : s) {
    lo = std::min(lo, std::sqrt(r.mode.z_sq));
    hi = std::max(hi, std::sqrt(r.mode.z_sq));
  }
  CHECK(hi / lo < 1.01);
  CHECK(s.front().mode.z1 == doctest::Approx(1e-6).epsilon(1e-10));
}

TEST_CASE("the wobbler does not decay") {
  SimConfig c;
  c.model = Model::sine_gordon_full;
  c.grid = Grid(100.0, 4001);
  c.dt = 0.025;
  c.T = 200.0;
  c.sponge_width = 20.0;
  c.initial.kind = InitialKind::wobbler_snapshot;
  c.initial.alpha = 0.9;
  const DiagnosticProfiles p = prepare_identity_diagnostics(c.grid);
  DiagnosticsSeries s;
  run(c, [&](const FieldState& st, const EnergyLedger& e) { s.push_back(make_record(st, e, p, 0.0, 0.0)); });
  const VerdictReport v = decay_verdict(s);
  MESSAGE("H initial " << v.H_initial_mean << ", final min " << v.H_final_min);
  CHECK(v.verdict == Verdict::non_decaying);
  REQUIRE(v.period.has_value());
  CHECK(*v.period == doctest::Approx(2.0 * std::numbers::pi / 0.9).epsilon(0.02));
  CHECK(v.H_final_min > 0.5 * v.H_initial_mean);
}
