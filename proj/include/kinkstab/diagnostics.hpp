#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kinkstab/grid.hpp"
#include "kinkstab/ode_profiles.hpp"
#include "kinkstab/simulator.hpp"

namespace kinkstab {

struct ModeState {
  double z1 = 0.0, z2 = 0.0;
  double alpha = 0.0;  ///< z₁² − z₂²
  double beta = 0.0;   ///< 2 z₁ z₂
  double gamma = 0.0;  ///< αβ
  double z_sq = 0.0;   ///< z₁² + z₂²
  static ModeState from(double z1, double z2);
};

/// Profiles sampled on the simulation grid. Without a mode (sine-Gordon) the
/// decomposition is the identity: z = 0 and v = φ.
struct DiagnosticProfiles {
  Grid grid;
  bool has_mode;
  GridFunction y1, q, g, psi, psi_prime, omega;
  double y1_norm_sq;  ///< discrete ⟨Y₁,Y₁⟩ on this grid
};

DiagnosticProfiles prepare_diagnostics(const ProfileSet& profiles, const Grid& sim_grid);
DiagnosticProfiles prepare_identity_diagnostics(const Grid& sim_grid);

struct Decomposition {
  ModeState mode;
  GridFunction u1, u2, v1, v2;
};

/// z₁ = ⟨φ₁,Y₁⟩, z₂ = ⟨φ₂,Y₁⟩/μ (normalized by the discrete ⟨Y₁,Y₁⟩),
/// u = φ − (z₁Y₁, μz₂Y₁), v₁ = u₁ + |z|²q, v₂ = u₂.
Decomposition decompose(const FieldState& s, const DiagnosticProfiles& p);

struct VirialValues {
  double I = 0.0, J = 0.0, K = 0.0, H_loc = 0.0;
  double cross = 0.0;  ///< ∫ sech(x/(2√2)) v₁ v₂
};

VirialValues virial_functionals(const GridFunction& v1, const GridFunction& v2,
                                const ModeState& mode, const DiagnosticProfiles& p, double kappa0,
                                double sigma);

struct DiagnosticsRecord {
  double t;
  ModeState mode;
  WeightedNorms u_norms, v_norms;
  double I, J, K, H_loc, cross;
  double E_pert, E_full;
  double energy_norm_sq;  ///< ‖φ₁‖²_{H¹} + ‖φ₂‖²_{L²}
};

DiagnosticsRecord make_record(const FieldState& s, const EnergyLedger& e,
                              const DiagnosticProfiles& p, double kappa0, double sigma);

using DiagnosticsSeries = std::vector<DiagnosticsRecord>;

/// Columns: t,z1,z2,alpha,beta,gamma,I,J,K,H_loc,h1w_v1,l2w_v2,E_pert, then
/// E_full,h1w_u1,l2w_u2,cross_w,energy_norm_sq.
void write_diagnostics_csv(std::ostream& os, const DiagnosticsSeries& series);

struct FittedConstant {
  double C;               ///< smallest C making the inequality hold on the window
  std::size_t samples;
};

struct MonitorReport {
  double epsilon;
  double window_end;  ///< monitored samples have t ≤ window_end
  // d𝓚/dt ≥ c (|z|⁴ + ‖v‖²_ω)
  double dK_c;              ///< largest c with d𝓚/dt ≥ c(...) on ≥ 95% of samples
  double dK_fraction;       ///< fraction of samples with d𝓚/dt ≥ dK_c·(...) and dK_c > 0
  double dK_positive_fraction;
  FittedConstant c_gamma;   ///< dγ/dt ≥ 2μ(β²−α²) − Cε(|z|⁴ + ‖v₁‖²_{H¹ω})
  FittedConstant c_virial;  ///< −d(𝓘+𝓙)/dt ≥ κ₀(α² + ‖v₁‖²_{H¹ω}) − Cε(|z|⁴ + ‖v₂‖²_{L²ω})
  FittedConstant c_cross;   ///< 2 d/dt∫ωv₁v₂ ≥ ‖v₂‖²_{L²ω} − C(|z|⁴ + ‖v₁‖²_{H¹ω})
  double kappa0;
  /// ∫₀ᵗ(|z|⁴ + ‖v‖²_ω)dt / ε² at t = T/4, T/2, 3T/4, T.
  std::vector<double> partial_integral_t;
  std::vector<double> partial_integral_over_eps2;
  /// Mean integrand over the last quarter divided by the mean over the first.
  double integrand_late_to_early;
};

/// Throws std::invalid_argument if the series has fewer than 5 samples or
/// uneven spacing (centered differences need a uniform stride).
MonitorReport inequality_monitors(const DiagnosticsSeries& series, double epsilon, double kappa0,
                                  double window_end);

enum class Verdict { decaying, non_decaying, inconclusive };
const char* to_string(Verdict v);

struct VerdictReport {
  Verdict verdict;
  double H_initial_mean, H_final_mean, H_final_min;
  double z_initial_mean, z_final_mean;
  std::optional<double> period;  ///< from the autocorrelation of 𝓗
};

/// Initial window [0, 0.1T], final window [0.9T, T].
VerdictReport decay_verdict(const DiagnosticsSeries& series, std::size_t min_samples = 20);

/// Period of a uniformly sampled signal: the first autocorrelation peak after
/// the first zero crossing that reaches 90% of the highest later peak
/// (parabolic refinement), or nullopt.
std::optional<double> detect_period(const std::vector<double>& values, double sample_dt);

}  // namespace kinkstab
