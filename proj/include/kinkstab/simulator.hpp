#pragma once

#include <functional>
#include <string>

#include "kinkstab/closed_forms.hpp"
#include "kinkstab/grid.hpp"

namespace kinkstab {

enum class Model { phi4_perturbation, sine_gordon_full };
enum class Boundary { sponge, dirichlet };
enum class InitialKind { zero, mode_kick, gaussian_odd, wobbler_snapshot };

const char* to_string(Model m);
const char* to_string(Boundary b);
const char* to_string(InitialKind k);

struct InitialDataSpec {
  InitialKind kind = InitialKind::mode_kick;
  double amplitude = 0.05;
  /// mode_kick: (0, εμY₁) instead of (εY₁, 0).
  bool kick_velocity = false;
  /// gaussian_odd: φ₁ ∝ x e^{−x²/w²}.
  double gaussian_width = 2.0;
  /// wobbler_snapshot: frequency and snapshot time.
  double alpha = 0.9;
  double t0 = 0.0;
};

struct SimConfig {
  Model model = Model::phi4_perturbation;
  Grid grid{200.0, 8001};
  double dt = 0.02;
  double T = 400.0;
  Boundary boundary = Boundary::sponge;
  double sponge_width = 30.0;
  double sponge_strength = 2.0;
  InitialDataSpec initial{};
  int output_stride = 2;

  /// Throws std::invalid_argument: CFL (dt ≤ 0.9 h), sponge_width < L/4,
  /// T > 0, stride ≥ 1, initial data compatible with the model.
  void validate() const;
  /// Damping rate σ(x): quadratic ramp from 0 to sponge_strength over the
  /// outer sponge_width band, zero in dirichlet mode.
  double sponge_rate(double x) const;
};

/// For φ⁴: the perturbation φ₁ = φ − H and φ₂ = ∂ₜφ. For sine-Gordon: the
/// deviation φ₁ = u − S from the static kink and φ₂ = ∂ₜu. Both odd.
struct FieldState {
  GridFunction phi1;
  GridFunction phi2;
  double t;
};

struct EnergyLedger {
  double E_full;   ///< energy of the full field
  double E_pert;   ///< 𝓔(φ) for φ⁴; the deviation Hamiltonian for sine-Gordon
  double drift;    ///< E_full − E_full(0)
};

class SimulationAborted : public NumericalError {
 public:
  SimulationAborted(const std::string& what, FieldState last)
      : NumericalError(what), state(std::move(last)) {}
  FieldState state;
};

FieldState make_initial_data(const SimConfig& cfg);

/// 𝓔(φ) = ∫φ₂² + ⟨𝓛φ₁,φ₁⟩ + 2∫Hφ₁³ + ½∫φ₁⁴ with the one-sided difference
/// gradient that matches the second-order stencil (φ⁴), or the conserved
/// deviation Hamiltonian (sine-Gordon).
double perturbation_energy(const FieldState& s, Model model);
EnergyLedger energy_ledger(const FieldState& s, Model model, double E_full0);
double background_energy(Model model);

/// ‖φ₁‖²_{H¹} + ‖φ₂‖²_{L²} (4th-order derivative).
double energy_norm_sq(const FieldState& s);

/// Advances a state by one step. Holds the per-grid precomputed
/// coefficient arrays.
class Stepper {
 public:
  explicit Stepper(const SimConfig& cfg);
  void step(FieldState& s) const;
  const SimConfig& config() const { return cfg_; }

 private:
  void accel(const GridFunction& phi1, std::vector<double>& out) const;
  SimConfig cfg_;
  std::vector<double> potential_;  // φ⁴: 2 − 3sech²; sine-Gordon: S
  std::vector<double> kink_;       // φ⁴: H
  std::vector<double> forcing_;    // sine-Gordon: discrete D²S
  std::vector<double> damp_half_;  // e^{−σ dt/2}
  mutable std::vector<double> a_;
};

struct RunResult {
  FieldState final_state;
  EnergyLedger ledger;
  long steps;
};

using OutputHook = std::function<void(const FieldState&, const EnergyLedger&)>;

/// Runs to T, calling `hook` at t = 0 and every output_stride steps.
/// Throws SimulationAborted on a non-finite value.
RunResult run(const SimConfig& cfg, const OutputHook& hook = {});
RunResult run_from(const SimConfig& cfg, FieldState state, const OutputHook& hook = {});

}  // namespace kinkstab
