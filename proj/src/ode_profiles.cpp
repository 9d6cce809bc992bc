#include "kinkstab/ode_profiles.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

namespace kinkstab {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

using State = std::array<double, 2>;

// u'' = pot(x) u + src(x) as a first-order system.
struct LinearOde {
  const std::function<double(double)>& pot;
  const std::function<double(double)>& src;
  void operator()(const State& y, State& dy, double x) const {
    dy[0] = y[1];
    dy[1] = pot(x) * y[0] + src(x);
  }
};

// Integrates through the listed abscissae (monotone, either direction) and
// returns the state at each of them.
std::vector<State> integrate_nodes(const LinearOde& ode, State y0, const std::vector<double>& xs,
                                   const ShootingOptions& o) {
  namespace odeint = boost::numeric::odeint;
  std::vector<State> out;
  out.reserve(xs.size());
  // Controlled (not dense-output) stepping lands exactly on every node; dense
  // interpolation noise would be amplified by 1/h² in residual checks.
  auto stepper = odeint::make_controlled(o.atol, o.rtol, odeint::runge_kutta_dopri5<State>());
  const double dt0 = xs.size() > 1 ? xs[1] - xs[0] : 1e-3;
  odeint::integrate_times(stepper, ode, y0, xs.begin(), xs.end(), dt0,
                          [&](const State& y, double) { out.push_back(y); });
  if (out.size() != xs.size()) throw NumericalError("ODE integration stopped early");
  for (const State& y : out) {
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
      throw NumericalError("ODE integration produced a non-finite value");
    }
  }
  return out;
}

// Sum y_p + s y_h of two trajectories.
std::vector<double> superpose(const std::vector<State>& p, const std::vector<State>& h, double s) {
  std::vector<double> out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) out[k] = p[k][0] + s * h[k][0];
  return out;
}

void require_converged(double defect, const ShootingOptions& o, const char* what) {
  if (!(defect < o.target)) {
    std::ostringstream msg;
    msg << what << ": shooting end condition not met (defect " << defect << ")";
    throw NumericalError(msg.str());
  }
}

std::vector<double> right_half_nodes(const Grid& grid) {
  std::vector<double> xs;
  xs.reserve(grid.size() - grid.center());
  for (std::size_t j = grid.center(); j < grid.size(); ++j) xs.push_back(grid.x(j));
  xs.front() = 0.0;
  return xs;
}

GridFunction mirror_odd(const Grid& grid, const std::vector<double>& right) {
  const std::size_t c = grid.center();
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < right.size(); ++k) {
    v[c + k] = right[k];
    v[c - k] = -right[k];
  }
  v[c] = 0.0;
  return GridFunction(grid, std::move(v), Parity::odd);
}

}  // namespace

const char* to_string(SharpPotential p) {
  return p == SharpPotential::v2_only ? "v2_only" : "full_v";
}

double sharp_potential(SharpPotential p, double x) {
  return p == SharpPotential::v2_only ? cf::virial_potential_v2(x) : cf::virial_potential(x);
}

GridFunction variation_of_parameters(const GridFunction& F) {
  const Grid& g = F.grid();
  const std::size_t n = g.size();
  std::vector<std::complex<double>> k(n), kbar_f(n), k_f(n);
  for (std::size_t j = 0; j < n; ++j) {
    k[j] = cf::jost(g.x(j));
    kbar_f[j] = std::conj(k[j]) * F[j];
    k_f[j] = k[j] * F[j];
  }
  const auto left = cumulative_integral(g, kbar_f);
  const auto right_acc = cumulative_integral(g, k_f);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::complex<double> right = right_acc.back() - right_acc[j];
    out[j] = std::imag(k[j] * left[j] + std::conj(k[j]) * right) / 12.0;
  }
  return GridFunction(g, std::move(out), F.parity());
}

ACoefficient compute_a(const Grid& grid, QuadratureRule rule) {
  const std::size_t n = grid.size();
  std::vector<double> num(n), den(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.x(j);
    const double imk = cf::jost(x).imag();
    const double f = cf::forcing_f(x);
    num[j] = (cf::psi(x) * cf::forcing_f_prime(x) + 0.5 * cf::psi_prime(x) * f) * imk;
    den[j] = cf::psi_prime(x) * f * imk;
  }
  ACoefficient out{};
  out.numerator = integrate(grid, num, rule);
  out.denominator = integrate(grid, den, rule);
  if (std::abs(out.denominator) < 1e-6) {
    throw NumericalError("fgr_denominator: <psi' f, Im k> vanishes numerically");
  }
  out.a = -out.numerator / out.denominator;
  return out;
}

GridFunction g_source(const Grid& grid, double a) {
  return GridFunction::sample(
      grid,
      [a](double x) {
        return cf::psi(x) * cf::forcing_f_prime(x) + (a + 0.5) * cf::psi_prime(x) * cf::forcing_f(x);
      },
      Parity::odd);
}

GridFunction solve_g(const Grid& grid, double a, double tail_tolerance) {
  GridFunction g = variation_of_parameters(g_source(grid, a));
  g *= -1.0;
  const double end = std::max(std::abs(g[0]), std::abs(g[g.size() - 1]));
  if (!(end <= tail_tolerance)) {
    std::ostringstream msg;
    msg << "g_schwartz_decay: |g(L)| = " << end << " exceeds " << tail_tolerance
        << " (source not orthogonal to the Jost function)";
    throw NumericalError(msg.str());
  }
  return g;
}

ShootingResult solve_q(const Grid& grid, const ShootingOptions& opts) {
  const double L = grid.half_width();
  const double xs_start = std::min(opts.q_shoot_radius, L);
  const double c = hy1_sq_y1_projection();

  // Abscissae from xs_start down to 0.
  std::vector<double> xs{xs_start};
  std::size_t j_top = grid.center();
  while (j_top + 1 < grid.size() && grid.x(j_top + 1) <= xs_start + 1e-12) ++j_top;
  for (std::size_t j = j_top + 1; j-- > grid.center();) {
    const double x = j == grid.center() ? 0.0 : grid.x(j);
    if (std::abs(x - xs_start) > 1e-12) xs.push_back(x);
  }

  const std::function<double(double)> pot = cf::linearized_potential;
  const std::function<double(double)> src = [](double x) { return -cf::forcing_f(x); };
  const LinearOde ode{pot, src};

  // At large x, f ≈ −(3/2)c Y₁, whose exact decaying response is −c Y₁. The
  // shooting parameter s scales the decaying homogeneous mode e^{−√2x}; the
  // problem is linear, so a particular and a homogeneous trajectory fix s
  // exactly (one secant step).
  const double decay = std::exp(-kSqrt2 * xs_start);
  const std::function<double(double)> none = [](double) { return 0.0; };
  const auto part = integrate_nodes(
      ode, State{-c * cf::internal_mode(xs_start), -c * cf::internal_mode_prime(xs_start)}, xs, opts);
  const auto hom = integrate_nodes(LinearOde{pot, none}, State{decay, -kSqrt2 * decay}, xs, opts);
  if (hom.back()[0] == 0.0) throw NumericalError("solve_q: homogeneous mode vanishes at 0");
  const double s = -part.back()[0] / hom.back()[0];
  std::vector<State> traj(part.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    traj[k] = {part[k][0] + s * hom[k][0], part[k][1] + s * hom[k][1]};
  }
  ShootingResult res{GridFunction(grid), 0.0, std::abs(traj.back()[0]), 2};
  require_converged(res.end_defect, opts, "solve_q");

  std::vector<double> right(grid.size() - grid.center());
  // traj runs from xs_start down to 0
  const bool start_is_node = std::abs(xs_start - grid.x(j_top)) <= 1e-12;
  const std::size_t offset = start_is_node ? 0 : 1;
  for (std::size_t j = grid.center(); j <= j_top; ++j) {
    const std::size_t k = offset + (j_top - j);
    right[j - grid.center()] = traj[k][0];
  }
  const double q_start = traj.front()[0];
  const double kappa = traj.front()[1] / q_start;
  for (std::size_t j = j_top + 1; j < grid.size(); ++j) {
    right[j - grid.center()] = q_start * std::exp(kappa * (grid.x(j) - xs_start));
  }
  res.slope_at_zero = traj.back()[1];
  res.u = mirror_odd(grid, right);
  return res;
}

ShootingResult solve_bounded_sharp(const std::function<double(double)>& rhs, const Grid& grid,
                                   SharpPotential potential, const ShootingOptions& opts) {
  const std::vector<double> xs = right_half_nodes(grid);
  const std::function<double(double)> pot = [potential](double x) {
    return -sharp_potential(potential, x);
  };
  const std::function<double(double)> src = [&rhs](double x) { return -rhs(x); };
  const LinearOde ode{pot, src};
  const std::function<double(double)> none = [](double) { return 0.0; };
  const auto part = integrate_nodes(ode, State{0.0, 0.0}, xs, opts);
  const auto hom = integrate_nodes(LinearOde{pot, none}, State{0.0, 1.0}, xs, opts);
  if (hom.back()[1] == 0.0) throw NumericalError("solve_bounded_sharp: degenerate homogeneous slope");
  const double s = -part.back()[1] / hom.back()[1];
  ShootingResult res{GridFunction(grid), s, std::abs(part.back()[1] + s * hom.back()[1]), 2};
  require_converged(res.end_defect, opts, "solve_bounded_sharp");
  const std::vector<double> right = superpose(part, hom, s);
  res.u = mirror_odd(grid, right);
  return res;
}

ShootingResult solve_bounded_sharp(const GridFunction& rhs, SharpPotential potential,
                                   const ShootingOptions& opts) {
  return solve_bounded_sharp([&rhs](double x) { return interpolate(rhs, x); }, rhs.grid(),
                             potential, opts);
}

BCoefficient compute_b(double a, const GridFunction& z1sharp, QuadratureRule rule) {
  const Grid& grid = z1sharp.grid();
  const GridFunction z1 = sample(FunctionId::Z1, grid);
  const GridFunction zf = GridFunction::sample(
      grid, [](double x) { return cf::zeta(x) * cf::forcing_f(x); }, Parity::odd);
  BCoefficient out{};
  out.z1_z1sharp = inner(z1, z1sharp, rule);
  out.zeta_f_z1sharp = inner(zf, z1sharp, rule);
  if (std::abs(out.z1_z1sharp) < 1e-8) {
    throw NumericalError("z1_z1sharp: <Z1, Z1#> vanishes numerically");
  }
  out.b = -a * out.zeta_f_z1sharp / out.z1_z1sharp;
  const GridFunction h = a * zf + out.b * z1;
  out.h_z1sharp = inner(h, z1sharp, rule);
  return out;
}

std::function<double(double)> h_function(double a, double b) {
  return [a, b](double x) { return a * cf::zeta(x) * cf::forcing_f(x) + b * cf::z1(x); };
}

ProfileSet build_profiles(const ProfileOptions& opts) {
  const Grid& grid = opts.grid;
  const ACoefficient ac = compute_a(grid, opts.rule);
  const double a = ac.a + opts.a_offset;
  GridFunction g = solve_g(grid, a, opts.g_tail_tolerance);
  ShootingResult q = solve_q(grid, opts.shooting);
  ShootingResult z1s = solve_bounded_sharp([](double x) { return cf::z1(x); }, grid,
                                           opts.sharp_potential, opts.shooting);
  const BCoefficient bc = compute_b(a, z1s.u, opts.rule);
  const auto hf = h_function(a, bc.b);
  GridFunction h_fn = GridFunction::sample(grid, hf, Parity::odd);
  ShootingResult hs = solve_bounded_sharp(hf, grid, opts.sharp_potential, opts.shooting);

  const double g_prime0 = derivative_at_center(g);
  const double f_g = inner(sample(FunctionId::f, grid), g, opts.rule);
  const double hsharp_h = inner(hs.u, h_fn, opts.rule);
  return ProfileSet{grid,
                    opts.sharp_potential,
                    std::move(q.u),
                    std::move(g),
                    std::move(z1s.u),
                    std::move(hs.u),
                    std::move(h_fn),
                    a,
                    ac.denominator,
                    bc.b,
                    bc.zeta_f_z1sharp,
                    bc.z1_z1sharp,
                    q.slope_at_zero,
                    g_prime0,
                    z1s.slope_at_zero,
                    hs.slope_at_zero,
                    f_g,
                    hsharp_h};
}

DecayingProfiles resample_decaying(const ProfileSet& p, const Grid& target) {
  return {resample(p.q, target), resample(p.g, target)};
}

}  // namespace kinkstab
