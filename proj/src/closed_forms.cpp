#include "kinkstab/closed_forms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kinkstab {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;
// 2^{-3/4} 3^{1/2}
const double kY1Norm = std::pow(2.0, -0.75) * std::sqrt(3.0);

}  // namespace

namespace cf {

double sech(double x) {
  const double a = std::abs(x);
  if (a > 700.0) return 0.0;
  return 1.0 / std::cosh(a);
}

double kink(double x) { return std::tanh(x / kSqrt2); }

double kink_prime(double x) {
  const double s = sech(x / kSqrt2);
  return s * s / kSqrt2;
}

double zero_mode(double x) {
  const double s = sech(x / kSqrt2);
  return 0.5 * s * s;
}

double internal_mode(double x) {
  const double y = x / kSqrt2;
  return kY1Norm * std::tanh(y) * sech(y);
}

double internal_mode_prime(double x) {
  const double y = x / kSqrt2;
  const double s = sech(y), t = std::tanh(y);
  return kY1Norm / kSqrt2 * s * (s * s - t * t);
}

double tilde_y1(double x) {
  const double s = sech(0.5 * x);
  return std::sqrt(15.0 / 8.0) * std::tanh(0.5 * x) * s * s;
}

double psi(double x, double lambda) { return lambda * kSqrt2 * std::tanh(x / (lambda * kSqrt2)); }

double psi_prime(double x, double lambda) {
  const double s = sech(x / (lambda * kSqrt2));
  return s * s;
}

double zeta(double x, double lambda) { return sech(x / (lambda * kSqrt2)); }

double virial_potential_v2(double x, double lambda) {
  const double a = std::abs(x);
  if (a > kAsymptoticSwitch) {
    // tanh·tanh → 1, cosh²(x/(λ√2)) sech²(x/√2) → e^{−(√2 − 2/(λ√2))|x|}
    return 3.0 * lambda * std::exp(-(kSqrt2 - 2.0 / (lambda * kSqrt2)) * a);
  }
  const double y = x / (lambda * kSqrt2);
  const double c = std::cosh(y);
  const double s = sech(x / kSqrt2);
  return 3.0 * lambda * std::tanh(y) * c * c * std::tanh(x / kSqrt2) * s * s;
}

double virial_potential(double x, double lambda) {
  const double z = zeta(x, lambda);
  return z * z / (4.0 * lambda * lambda) + virial_potential_v2(x, lambda);
}

double z1(double x, double lambda) {
  const double a = std::abs(x);
  if (a > kAsymptoticSwitch) {
    const double rate = 1.0 / kSqrt2 - 1.0 / (lambda * kSqrt2);
    return std::copysign(kY1Norm * std::exp(-rate * a), x);
  }
  return internal_mode(x) * std::cosh(x / (lambda * kSqrt2));
}

double forcing_f(double x) {
  const double y1 = internal_mode(x);
  return 1.5 * (kink(x) * y1 * y1 - hy1_sq_y1_projection() * y1);
}

double forcing_f_prime(double x) {
  const double y1 = internal_mode(x);
  const double y1p = internal_mode_prime(x);
  return 1.5 * (kink_prime(x) * y1 * y1 + 2.0 * kink(x) * y1 * y1p - hy1_sq_y1_projection() * y1p);
}

double linearized_potential(double x) {
  const double s = sech(x / kSqrt2);
  return 2.0 - 3.0 * s * s;
}

std::complex<double> jost(double x) {
  const double s = sech(x / kSqrt2);
  const std::complex<double> m(1.0 + 0.5 * s * s, kSqrt2 * std::tanh(x / kSqrt2));
  return std::polar(1.0, 2.0 * x) * m;
}

double sine_gordon_kink(double x) {
  if (x > 0.0) return 2.0 * kPi - 4.0 * std::atan(std::exp(-x));
  return 4.0 * std::atan(std::exp(x));
}

}  // namespace cf

std::string_view name_of(FunctionId id) {
  switch (id) {
    case FunctionId::H: return "H";
    case FunctionId::Hprime: return "Hprime";
    case FunctionId::Y0: return "Y0";
    case FunctionId::Y1: return "Y1";
    case FunctionId::Y1prime: return "Y1prime";
    case FunctionId::tildeY1: return "tildeY1";
    case FunctionId::psi: return "psi";
    case FunctionId::psi_prime: return "psi_prime";
    case FunctionId::zeta: return "zeta";
    case FunctionId::V: return "V";
    case FunctionId::V2: return "V2";
    case FunctionId::Z1: return "Z1";
    case FunctionId::f: return "f";
    case FunctionId::f_prime: return "f_prime";
    case FunctionId::weight_omega: return "weight_omega";
    case FunctionId::jost_k: return "jost_k";
    case FunctionId::sg_kink_S: return "sg_kink_S";
  }
  return "unknown";
}

Parity parity_of(FunctionId id) {
  switch (id) {
    case FunctionId::H:
    case FunctionId::Y1:
    case FunctionId::tildeY1:
    case FunctionId::psi:
    case FunctionId::Z1:
    case FunctionId::f:
      return Parity::odd;
    case FunctionId::Hprime:
    case FunctionId::Y0:
    case FunctionId::Y1prime:
    case FunctionId::psi_prime:
    case FunctionId::zeta:
    case FunctionId::V:
    case FunctionId::V2:
    case FunctionId::f_prime:
    case FunctionId::weight_omega:
      return Parity::even;
    // k(−x) = conj k(x); S(−x) = 2π − S(x)
    case FunctionId::jost_k:
    case FunctionId::sg_kink_S:
      return Parity::none;
  }
  return Parity::none;
}

bool is_complex(FunctionId id) { return id == FunctionId::jost_k; }

double evaluate_real(FunctionId id, double x) {
  switch (id) {
    case FunctionId::H: return cf::kink(x);
    case FunctionId::Hprime: return cf::kink_prime(x);
    case FunctionId::Y0: return cf::zero_mode(x);
    case FunctionId::Y1: return cf::internal_mode(x);
    case FunctionId::Y1prime: return cf::internal_mode_prime(x);
    case FunctionId::tildeY1: return cf::tilde_y1(x);
    case FunctionId::psi: return cf::psi(x);
    case FunctionId::psi_prime: return cf::psi_prime(x);
    case FunctionId::zeta: return cf::zeta(x);
    case FunctionId::V: return cf::virial_potential(x);
    case FunctionId::V2: return cf::virial_potential_v2(x);
    case FunctionId::Z1: return cf::z1(x);
    case FunctionId::f: return cf::forcing_f(x);
    case FunctionId::f_prime: return cf::forcing_f_prime(x);
    case FunctionId::weight_omega: return local_weight(x);
    case FunctionId::sg_kink_S: return cf::sine_gordon_kink(x);
    case FunctionId::jost_k: break;
  }
  throw std::invalid_argument("evaluate_real called on a complex-valued catalog entry");
}

std::complex<double> evaluate(FunctionId id, double x) {
  if (id == FunctionId::jost_k) return cf::jost(x);
  return {evaluate_real(id, x), 0.0};
}

GridFunction sample(FunctionId id, const Grid& grid) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) v[j] = evaluate_real(id, grid.x(j));
  return GridFunction(grid, std::move(v), parity_of(id));
}

ComplexGridFunction sample_complex(FunctionId id, const Grid& grid) {
  std::vector<std::complex<double>> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) v[j] = evaluate(id, grid.x(j));
  return ComplexGridFunction(grid, std::move(v), parity_of(id));
}

double hy1_sq_y1_projection() {
  // Function-local static: initialized exactly once, thread-safe.
  static const double value = [] {
    const Grid g(60.0, 24001);
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double y1 = cf::internal_mode(g.x(j));
      v[j] = cf::kink(g.x(j)) * y1 * y1 * y1;
    }
    return integrate(g, v, QuadratureRule::simpson);
  }();
  return value;
}

WobblerParams WobblerParams::make(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("wobbler frequency alpha must lie in (0, 1)");
  }
  return {alpha, std::sqrt(1.0 - alpha * alpha)};
}

namespace {

// U and V (and their time derivatives) multiplied by the common factor
// e^{−(1+2β)x} for x > 0, which leaves Arg and the ∂ₜ formula unchanged.
struct ScaledUV {
  double u, v, ut, vt;
};

ScaledUV scaled_uv(const WobblerParams& p, double t, double x) {
  const double b = p.beta;
  const double r = (1.0 + b) / (1.0 - b);
  const double q = 2.0 * b / (1.0 - b);
  const double c = std::cos(p.alpha * t);
  const double s = std::sin(p.alpha * t);
  const double shift = x > 0.0 ? (1.0 + 2.0 * b) * x : 0.0;
  auto e = [&](double rate) { return std::exp(rate * x - shift); };
  ScaledUV out{};
  out.u = e(0.0) + r * e(2.0 * b) - q * e(1.0 + b) * c;
  out.v = r * e(1.0) + e(1.0 + 2.0 * b) - q * e(b) * c;
  out.ut = q * p.alpha * e(1.0 + b) * s;
  out.vt = q * p.alpha * e(b) * s;
  return out;
}

}  // namespace

double wobbler(const WobblerParams& p, double t, double x) {
  const ScaledUV w = scaled_uv(p, t, x);
  return 4.0 * std::atan2(w.v, w.u);
}

double wobbler_dt(const WobblerParams& p, double t, double x) {
  const ScaledUV w = scaled_uv(p, t, x);
  const double den = w.u * w.u + w.v * w.v;
  return 4.0 * (w.u * w.vt - w.v * w.ut) / den;
}

GridFunction wobbler_profile(const WobblerParams& p, double t, const Grid& grid) {
  std::vector<double> v(grid.size());
  double offset = 0.0;
  double prev = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double w = wobbler(p, t, grid.x(j)) + offset;
    if (j > 0) {
      // a 2π wrap of Arg shows up as an 8π jump in W
      while (w - prev > 4.0 * kPi) { w -= 8.0 * kPi; offset -= 8.0 * kPi; }
      while (prev - w > 4.0 * kPi) { w += 8.0 * kPi; offset += 8.0 * kPi; }
    }
    v[j] = w;
    prev = w;
  }
  return GridFunction(grid, std::move(v), Parity::none);
}

namespace {

template <typename GF>
GF apply_L_impl(const GF& fcn, StencilOrder order) {
  GF out = second_derivative(fcn, order);
  const Grid& g = fcn.grid();
  for (std::size_t j = 0; j < g.size(); ++j) {
    out[j] = -out[j] + cf::linearized_potential(g.x(j)) * fcn[j];
  }
  out.set_parity(fcn.parity());
  return out;
}

}  // namespace

GridFunction apply_L(const GridFunction& fcn, StencilOrder order) {
  return apply_L_impl(fcn, order);
}

ComplexGridFunction apply_L(const ComplexGridFunction& fcn, StencilOrder order) {
  return apply_L_impl(fcn, order);
}

}  // namespace kinkstab
