#pragma once

#include <string>

#include "kinkstab/grid.hpp"
#include "kinkstab/ode_profiles.hpp"

namespace kinkstab {

struct FgrReport {
  double fgr_basic;     ///< ⟨Im k, H Y₁²⟩
  double fgr_modified;  ///< ⟨Im k, (H Y₁² − ⟨HY₁²,Y₁⟩Y₁) sech²(x/(8√2))⟩
  double psi_f_imk;     ///< ⟨ψ'f, Im k⟩
  double a;
  /// |Simpson − trapezoid| for each of the three integrals.
  double err_basic, err_modified, err_psi_f_imk;
};

FgrReport fgr_constants(const Grid& grid = Grid(60.0, 24001));

struct DominationReport {
  double x_max;
  double step;
  double margin;         ///< min over the sweep of 2.1 sech²(x/2) − V₂(x)
  double margin_x;
  double max_ratio;      ///< max over the sweep of V₂ / (2.1 sech²(x/2))
  double max_ratio_x;
  double v2_max;
  double v2_argmax;
  /// Beyond x_max: V₂/(2.1 sech²(x/2)) ≤ prefactor · e^{−rate·x}, from
  /// cosh y ≤ e^y, sech y ≤ 2e^{−y} and sech²(x/2) ≥ e^{−x}.
  double tail_prefactor;
  double tail_rate;
  double tail_ratio_bound;  ///< the bound at x = x_max
  bool certified;           ///< margin > 0, max_ratio < 1, tail bound < 1, rate > 0
};

DominationReport check_potential_domination(double x_max = 60.0, double step = 1e-3);

struct MinOverNu {
  double nu_star;
  double min_value;  ///< min_ν ∫(A − νB)²
  double int_A2;
  double int_B2;
};

/// A, B = even antiderivatives of Ỹ₁ and Z₁.
MinOverNu min_over_nu(const Grid& grid = Grid(60.0, 24001));

struct CoercivityOptions {
  double half_width = 30.0;
  double spacing = 0.1;
  SharpPotential potential = SharpPotential::full_v;
};

struct CoercivityReport {
  std::string form_id;
  double constrained_min;
  double unconstrained_min;
  std::string constraint_set;
  double half_width;
  double spacing;
};

/// min 𝓑♯(w)/∫w²ₓ over odd w with ⟨w, Z₁⟩ = 0 (and without the constraint).
CoercivityReport coercivity_B_sharp(const CoercivityOptions& opts = {});

struct DSharpReport {
  CoercivityReport joint;      ///< min 𝓓♯(w,α)/(α² + ∫w²ₓ), direct solve
  double alpha0_slice_min;     ///< the α = 0 restriction, equal to the 𝓑♯ minimum
  double f_g;
  double hsharp_h;             ///< from the shooting profile
  double hsharp_h_discrete;    ///< from the discrete 𝓛♯ solve on the same mesh
  double det_2x2;              ///< ⟨f,g⟩⟨h♯,h⟩ − ¼⟨h♯,h⟩²
  double min_eig_2x2;
  bool reduced_positive;
};

/// Joint form 𝓓♯(w,α) = 𝓑♯(w) + αa∫wζf + α²⟨f,g⟩ for odd w, ⟨w,Z₁⟩ = 0.
/// h = aζf + bZ₁ enters the decomposition cross-check.
/// Throws NumericalError if the 2×2 reduced form is not positive definite.
DSharpReport coercivity_D_sharp(double a, double b, double f_g, double hsharp_h,
                                const CoercivityOptions& opts = {});

/// min ⟨𝓛w,w⟩/‖w‖²_{H¹} over odd w.
CoercivityReport energy_lower_bound_check(const CoercivityOptions& opts = {});

/// ⟨𝓛w,w⟩/‖w‖²_{H¹} for a given grid function (4th-order derivative).
double energy_quotient(const GridFunction& w);

/// |κ(h/2) − κ(h)| / |κ(h)|.
double refinement_change(double coarse, double fine);

}  // namespace kinkstab
