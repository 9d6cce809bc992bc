#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kinkstab/closed_forms.hpp"
#include "kinkstab/grid.hpp"

namespace kinkstab {

/// Which potential the ♯-operator −∂²ₓ − V uses.
///   full_v:  V = ζ²/(4λ²) + V₂, the potential of the transformed virial form.
///   v2_only: V₂ alone; the reference constants for Z₁♯ and h♯ are reproduced
///            with this choice.
enum class SharpPotential { v2_only, full_v };

const char* to_string(SharpPotential p);
double sharp_potential(SharpPotential p, double x);

struct ShootingOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// End-condition target: |u(0)| for q, |u'(L)| for the bounded problems.
  double target = 1e-8;
  /// Inward-shooting start for q; beyond it q follows an exponential tail.
  double q_shoot_radius = 25.0;
};

/// G = (1/12) Im(k ∫_{-L}^x k̄F + k̄ ∫_x^L kF), the solution of (−𝓛+6)G = F
/// decaying at both ends whenever ⟨k, F⟩ = 0. Cumulative integrals use the
/// trapezoid rule.
GridFunction variation_of_parameters(const GridFunction& F);

struct ACoefficient {
  double a;
  double numerator;    ///< ⟨ψf' + ½ψ'f, Im k⟩
  double denominator;  ///< ⟨ψ'f, Im k⟩
};

/// a = −⟨ψf' + ½ψ'f, Im k⟩ / ⟨ψ'f, Im k⟩. Throws NumericalError if the
/// denominator is within 1e-6 of zero.
ACoefficient compute_a(const Grid& grid, QuadratureRule rule = QuadratureRule::simpson);

/// Right-hand side ψf' + (a+½)ψ'f of the g equation.
GridFunction g_source(const Grid& grid, double a);

/// g = −variation_of_parameters(ψf' + (a+½)ψ'f). Throws NumericalError
/// (message starting with "g_schwartz_decay") when |g(±L)| > tail_tolerance.
GridFunction solve_g(const Grid& grid, double a, double tail_tolerance = 1e-8);

struct ShootingResult {
  GridFunction u;
  double slope_at_zero;  ///< u'(0)
  double end_defect;     ///< |u(L)| or |u'(L)| depending on the problem
  int trajectories;  ///< ODE integrations performed
};

/// Odd decaying solution of 𝓛q = f. Shoots inward from q_shoot_radius with
/// the amplitude of the decaying homogeneous mode as the shooting parameter,
/// fixed by q(0) = 0. The ODE is linear, so the secant step on that
/// parameter is exact: particular + s·homogeneous.
ShootingResult solve_q(const Grid& grid, const ShootingOptions& opts = {});

/// Odd bounded solution of (−∂²ₓ − V)u = rhs: u(0) = 0, and u'(0) chosen so
/// that u'(L) = 0 (exact secant step on the linear shooting map).
ShootingResult solve_bounded_sharp(const std::function<double(double)>& rhs, const Grid& grid,
                                   SharpPotential potential, const ShootingOptions& opts = {});
ShootingResult solve_bounded_sharp(const GridFunction& rhs, SharpPotential potential,
                                   const ShootingOptions& opts = {});

struct BCoefficient {
  double b;
  double zeta_f_z1sharp;  ///< ⟨ζf, Z₁♯⟩
  double z1_z1sharp;      ///< ⟨Z₁, Z₁♯⟩
  double h_z1sharp;       ///< ⟨h, Z₁♯⟩ after assembly, ≈ 0
};

/// b = −a⟨ζf, Z₁♯⟩/⟨Z₁, Z₁♯⟩. Throws NumericalError if ⟨Z₁, Z₁♯⟩ ≈ 0.
BCoefficient compute_b(double a, const GridFunction& z1sharp,
                       QuadratureRule rule = QuadratureRule::simpson);

/// h = aζf + bZ₁ as a closed-form map.
std::function<double(double)> h_function(double a, double b);

struct ProfileOptions {
  Grid grid{60.0, 24001};
  SharpPotential sharp_potential = SharpPotential::v2_only;
  ShootingOptions shooting{};
  QuadratureRule rule = QuadratureRule::simpson;
  /// Added to a before g is built. Test hook for fault injection; 0 otherwise.
  double a_offset = 0.0;
  double g_tail_tolerance = 1e-8;
};

struct ProfileSet {
  Grid grid;
  SharpPotential sharp_potential;
  GridFunction q, g, z1sharp, hsharp, h_fn;
  double a;
  double a_denominator;
  double b;
  double zeta_f_z1sharp;
  double z1_z1sharp;
  double q_prime0, g_prime0, z1sharp_prime0, hsharp_prime0;
  double f_g;       ///< ⟨f, g⟩
  double hsharp_h;  ///< ⟨h♯, h⟩
};

ProfileSet build_profiles(const ProfileOptions& opts = {});

/// Moves the decaying profiles q and g (the ones the diagnostics need) onto
/// another grid; values outside the source interval are set to 0.
struct DecayingProfiles {
  GridFunction q, g;
};
DecayingProfiles resample_decaying(const ProfileSet& p, const Grid& target);

}  // namespace kinkstab
