#include "kinkstab/simulator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace kinkstab {

const char* to_string(Model m) {
  return m == Model::phi4_perturbation ? "phi4_perturbation" : "sine_gordon_full";
}

const char* to_string(Boundary b) { return b == Boundary::sponge ? "sponge" : "dirichlet"; }

const char* to_string(InitialKind k) {
  switch (k) {
    case InitialKind::zero: return "zero";
    case InitialKind::mode_kick: return "mode_kick";
    case InitialKind::gaussian_odd: return "gaussian_odd";
    case InitialKind::wobbler_snapshot: return "wobbler_snapshot";
  }
  return "unknown";
}

void SimConfig::validate() const {
  const double h = grid.spacing();
  if (!(dt > 0.0) || dt > 0.9 * h * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "CFL violated: dt = " << dt << " must satisfy 0 < dt <= 0.9 h = " << 0.9 * h;
    throw std::invalid_argument(msg.str());
  }
  if (!(T > 0.0)) throw std::invalid_argument("final time T must be positive");
  if (output_stride < 1) throw std::invalid_argument("output_stride must be at least 1");
  if (boundary == Boundary::sponge) {
    if (!(sponge_width > 0.0) || !(sponge_width < grid.half_width() / 4.0)) {
      throw std::invalid_argument("sponge_width must lie in (0, L/4)");
    }
    if (!(sponge_strength >= 0.0)) throw std::invalid_argument("sponge_strength must be >= 0");
  }
  if (!(initial.amplitude >= 0.0)) throw std::invalid_argument("amplitude must be >= 0");
  const bool sg = model == Model::sine_gordon_full;
  if (initial.kind == InitialKind::wobbler_snapshot && !sg) {
    throw std::invalid_argument("wobbler_snapshot initial data requires the sine_gordon_full model");
  }
  if ((initial.kind == InitialKind::mode_kick || initial.kind == InitialKind::gaussian_odd) && sg) {
    throw std::invalid_argument(std::string(to_string(initial.kind)) +
                                " initial data requires the phi4_perturbation model");
  }
  if (initial.kind == InitialKind::wobbler_snapshot) WobblerParams::make(initial.alpha);
}

double SimConfig::sponge_rate(double x) const {
  if (boundary != Boundary::sponge) return 0.0;
  const double inner_edge = grid.half_width() - sponge_width;
  const double d = std::abs(x) - inner_edge;
  if (d <= 0.0) return 0.0;
  const double r = d / sponge_width;
  return sponge_strength * r * r;
}

namespace {

void require_finite(const FieldState& s) {
  for (std::size_t j = 0; j < s.phi1.size(); ++j) {
    if (!std::isfinite(s.phi1[j]) || !std::isfinite(s.phi2[j])) {
      std::ostringstream msg;
      msg << "non-finite field value at t = " << s.t << ", x = " << s.phi1.grid().x(j);
      throw SimulationAborted(msg.str(), s);
    }
  }
}

// Σ (φ_{j} − φ_{j−1})²/h over all edges, with zero ghost values at both ends.
double gradient_energy(const GridFunction& f) {
  const std::size_t n = f.size();
  double s = f[0] * f[0] + f[n - 1] * f[n - 1];
  for (std::size_t j = 1; j < n; ++j) {
    const double d = f[j] - f[j - 1];
    s += d * d;
  }
  return s / f.grid().spacing();
}

}  // namespace

FieldState make_initial_data(const SimConfig& cfg) {
  cfg.validate();
  const Grid& g = cfg.grid;
  const InitialDataSpec& in = cfg.initial;
  FieldState s{GridFunction(g, Parity::odd), GridFunction(g, Parity::odd), 0.0};
  switch (in.kind) {
    case InitialKind::zero:
      break;
    case InitialKind::mode_kick: {
      GridFunction y1 = sample(FunctionId::Y1, g);
      if (in.kick_velocity) {
        s.phi2 = (in.amplitude * ModelConstants::mu) * y1;
      } else {
        s.phi1 = in.amplitude * y1;
      }
      break;
    }
    case InitialKind::gaussian_odd: {
      const double w = in.gaussian_width;
      GridFunction bump =
          GridFunction::sample(g, [w](double x) { return x * std::exp(-x * x / (w * w)); }, Parity::odd);
      const FieldState probe{bump, GridFunction(g, Parity::odd), 0.0};
      const double norm = std::sqrt(energy_norm_sq(probe));
      s.phi1 = (in.amplitude / norm) * bump;
      break;
    }
    case InitialKind::wobbler_snapshot: {
      const WobblerParams p = WobblerParams::make(in.alpha);
      GridFunction u = wobbler_profile(p, in.t0, g);
      u -= sample(FunctionId::sg_kink_S, g);
      u.symmetrize(Parity::odd);
      s.phi1 = u;
      s.phi2 = GridFunction::sample(g, [&](double x) { return wobbler_dt(p, in.t0, x); });
      s.phi2.symmetrize(Parity::odd);
      s.t = 0.0;
      break;
    }
  }
  return s;
}

double background_energy(Model model) {
  // E[H] = ½∫sech⁴(x/√2) = 2√2/3; E[S] = 8.
  return model == Model::phi4_perturbation ? 2.0 * std::numbers::sqrt2 / 3.0 : 8.0;
}

double perturbation_energy(const FieldState& s, Model model) {
  const Grid& g = s.phi1.grid();
  const double h = g.spacing();
  double sum = 0.0;
  if (model == Model::phi4_perturbation) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double x = g.x(j);
      const double p = s.phi1[j];
      sum += s.phi2[j] * s.phi2[j] + cf::linearized_potential(x) * p * p +
             2.0 * cf::kink(x) * p * p * p + 0.5 * p * p * p * p;
    }
    return h * sum + gradient_energy(s.phi1);
  }
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    const double S = cf::sine_gordon_kink(x);
    const double d2s =
        (cf::sine_gordon_kink(x - h) - 2.0 * S + cf::sine_gordon_kink(x + h)) / (h * h);
    const double p = s.phi1[j];
    sum += 0.5 * s.phi2[j] * s.phi2[j] - p * d2s + (std::cos(S) - std::cos(S + p));
  }
  return h * sum + 0.5 * gradient_energy(s.phi1);
}

EnergyLedger energy_ledger(const FieldState& s, Model model, double E_full0) {
  EnergyLedger e{};
  e.E_pert = perturbation_energy(s, model);
  // For φ⁴ the Hamiltonian of the perturbation system is ½𝓔.
  const double factor = model == Model::phi4_perturbation ? 0.5 : 1.0;
  e.E_full = background_energy(model) + factor * e.E_pert;
  e.drift = std::isnan(E_full0) ? 0.0 : e.E_full - E_full0;
  return e;
}

double energy_norm_sq(const FieldState& s) {
  const GridFunction d = derivative(s.phi1);
  const Grid& g = s.phi1.grid();
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    v[j] = d[j] * d[j] + s.phi1[j] * s.phi1[j] + s.phi2[j] * s.phi2[j];
  }
  return integrate(g, v);
}

Stepper::Stepper(const SimConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const Grid& g = cfg_.grid;
  const std::size_t n = g.size();
  const double h = g.spacing();
  potential_.resize(n);
  kink_.resize(n);
  forcing_.assign(n, 0.0);
  damp_half_.resize(n);
  a_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = g.x(j);
    if (cfg_.model == Model::phi4_perturbation) {
      potential_[j] = cf::linearized_potential(x);
      kink_[j] = cf::kink(x);
    } else {
      potential_[j] = cf::sine_gordon_kink(x);
      // D²S with the exact kink at the ghost points, so the residual of S on
      // the grid is part of the evolved equation.
      forcing_[j] =
          (cf::sine_gordon_kink(x - h) - 2.0 * potential_[j] + cf::sine_gordon_kink(x + h)) /
          (h * h);
    }
    damp_half_[j] = std::exp(-0.5 * cfg_.dt * cfg_.sponge_rate(x));
  }
}

void Stepper::accel(const GridFunction& phi1, std::vector<double>& out) const {
  const std::size_t n = phi1.size();
  const double inv_h2 = 1.0 / (cfg_.grid.spacing() * cfg_.grid.spacing());
  const bool phi4 = cfg_.model == Model::phi4_perturbation;
  for (std::size_t j = 0; j < n; ++j) {
    const double left = j > 0 ? phi1[j - 1] : 0.0;
    const double right = j + 1 < n ? phi1[j + 1] : 0.0;
    const double p = phi1[j];
    const double lap = (left - 2.0 * p + right) * inv_h2;
    if (phi4) {
      out[j] = lap - potential_[j] * p - p * p * (3.0 * kink_[j] + p);
    } else {
      out[j] = lap + forcing_[j] - std::sin(potential_[j] + p);
    }
  }
}

void Stepper::step(FieldState& s) const {
  const std::size_t n = s.phi1.size();
  const double dt = cfg_.dt;
  const bool sponge = cfg_.boundary == Boundary::sponge;
  auto p1 = s.phi1.values();
  auto p2 = s.phi2.values();
  if (sponge) {
    for (std::size_t j = 0; j < n; ++j) p2[j] *= damp_half_[j];
  }
  accel(s.phi1, a_);
  for (std::size_t j = 0; j < n; ++j) {
    p2[j] += 0.5 * dt * a_[j];
    p1[j] += dt * p2[j];
  }
  s.phi1.symmetrize(Parity::odd);
  accel(s.phi1, a_);
  for (std::size_t j = 0; j < n; ++j) p2[j] += 0.5 * dt * a_[j];
  if (sponge) {
    for (std::size_t j = 0; j < n; ++j) p2[j] *= damp_half_[j];
  }
  s.phi2.symmetrize(Parity::odd);
  s.t += dt;
}

RunResult run_from(const SimConfig& cfg, FieldState state, const OutputHook& hook) {
  const Stepper stepper(cfg);
  const double E0 = energy_ledger(state, cfg.model, NAN).E_full;
  require_finite(state);
  if (hook) hook(state, energy_ledger(state, cfg.model, E0));
  const double t_start = state.t;
  const long steps = std::lround(cfg.T / cfg.dt);
  for (long k = 1; k <= steps; ++k) {
    stepper.step(state);
    // recomputing t from the step count avoids accumulated round-off
    state.t = t_start + static_cast<double>(k) * cfg.dt;
    if (k % cfg.output_stride == 0 || k == steps) {
      require_finite(state);
      if (hook && k % cfg.output_stride == 0) hook(state, energy_ledger(state, cfg.model, E0));
    }
  }
  EnergyLedger ledger = energy_ledger(state, cfg.model, E0);
  return {std::move(state), ledger, steps};
}

RunResult run(const SimConfig& cfg, const OutputHook& hook) {
  return run_from(cfg, make_initial_data(cfg), hook);
}

}  // namespace kinkstab
