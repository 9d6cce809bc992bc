#pragma once

#include <complex>
#include <numbers>
#include <string_view>

#include "kinkstab/grid.hpp"

namespace kinkstab {

/// Fixed constants of the φ⁴ kink problem.
struct ModelConstants {
  /// Internal-mode frequency, μ² = 3/2.
  static constexpr double mu_sq = 1.5;
  static inline const double mu = std::sqrt(1.5);
  /// Scale λ of the virial weight ψ.
  static constexpr double lambda_virial = 8.0;
  /// Length scale of the local weight sech(x / (2√2)).
  static constexpr double weight_scale = 2.0 * std::numbers::sqrt2;
};

/// Beyond this |x| the exponentially growing factors (cosh of the virial
/// scale) are replaced by their asymptotic exponentials.
inline constexpr double kAsymptoticSwitch = 250.0;

enum class FunctionId {
  H,           // kink tanh(x/√2)
  Hprime,
  Y0,          // ½ sech²(x/√2), zero mode
  Y1,          // internal mode, eigenvalue 3/2
  Y1prime,
  tildeY1,     // √(15/8) sinh(x/2)/cosh³(x/2)
  psi,         // λ√2 tanh(x/(λ√2))
  psi_prime,
  zeta,        // √ψ'
  V,           // potential of the transformed virial form
  V2,          // its dominant part, without the ζ²/(4λ²) term
  Z1,          // Y1 cosh(x/(λ√2))
  f,           // (3/2)(H Y1² − ⟨H Y1², Y1⟩ Y1)
  f_prime,
  weight_omega,  // sech(x/(2√2))
  jost_k,      // Jost solution of (−𝓛+6)k = 0
  sg_kink_S,   // sine-Gordon kink 4 arctan(eˣ)
};

std::string_view name_of(FunctionId id);
Parity parity_of(FunctionId id);
bool is_complex(FunctionId id);

/// Closed-form value; real catalog entries have zero imaginary part.
std::complex<double> evaluate(FunctionId id, double x);
/// Real-valued catalog entries only; throws std::invalid_argument for jost_k.
double evaluate_real(FunctionId id, double x);

GridFunction sample(FunctionId id, const Grid& grid);
ComplexGridFunction sample_complex(FunctionId id, const Grid& grid);

/// ⟨H Y1², Y1⟩, computed once by Simpson quadrature on [-60, 60] and cached.
double hy1_sq_y1_projection();

/// Individual closed forms.
namespace cf {
double sech(double x);
double kink(double x);
double kink_prime(double x);
double zero_mode(double x);
double internal_mode(double x);
double internal_mode_prime(double x);
double tilde_y1(double x);
double psi(double x, double lambda = ModelConstants::lambda_virial);
double psi_prime(double x, double lambda = ModelConstants::lambda_virial);
double zeta(double x, double lambda = ModelConstants::lambda_virial);
double virial_potential(double x, double lambda = ModelConstants::lambda_virial);
double virial_potential_v2(double x, double lambda = ModelConstants::lambda_virial);
double z1(double x, double lambda = ModelConstants::lambda_virial);
double forcing_f(double x);
double forcing_f_prime(double x);
double linearized_potential(double x);  // 2 − 3 sech²(x/√2)
std::complex<double> jost(double x);
double sine_gordon_kink(double x);
}  // namespace cf

struct WobblerParams {
  double alpha;
  double beta;
  /// Throws std::invalid_argument unless 0 < alpha < 1.
  static WobblerParams make(double alpha);
};

/// Wobbling kink W_α(t, x) = 4 Arg(U + iV) of sine-Gordon.
double wobbler(const WobblerParams& p, double t, double x);
/// ∂ₜ W_α(t, x).
double wobbler_dt(const WobblerParams& p, double t, double x);
/// W_α(t, ·) on a grid, with the argument unwrapped continuously in x
/// starting from the left end, where W_α ≈ 0.
GridFunction wobbler_profile(const WobblerParams& p, double t, const Grid& grid);

/// Discrete 𝓛 = −∂²ₓ + 2 − 3 sech²(x/√2).
GridFunction apply_L(const GridFunction& fcn, StencilOrder order = StencilOrder::fourth);
ComplexGridFunction apply_L(const ComplexGridFunction& fcn,
                            StencilOrder order = StencilOrder::fourth);

}  // namespace kinkstab
