#include "kinkstab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "kinkstab/closed_forms.hpp"

namespace kinkstab {

ModeState ModeState::from(double z1, double z2) {
  ModeState m;
  m.z1 = z1;
  m.z2 = z2;
  m.alpha = z1 * z1 - z2 * z2;
  m.beta = 2.0 * z1 * z2;
  m.gamma = m.alpha * m.beta;
  m.z_sq = z1 * z1 + z2 * z2;
  return m;
}

namespace {

DiagnosticProfiles common_profiles(const Grid& g, bool has_mode, GridFunction q, GridFunction gg) {
  GridFunction y1 = sample(FunctionId::Y1, g);
  const double n2 = inner(y1, y1);
  return DiagnosticProfiles{g,
                            has_mode,
                            std::move(y1),
                            std::move(q),
                            std::move(gg),
                            sample(FunctionId::psi, g),
                            sample(FunctionId::psi_prime, g),
                            sample(FunctionId::weight_omega, g),
                            n2};
}

}  // namespace

DiagnosticProfiles prepare_diagnostics(const ProfileSet& profiles, const Grid& sim_grid) {
  DecayingProfiles d = resample_decaying(profiles, sim_grid);
  return common_profiles(sim_grid, true, std::move(d.q), std::move(d.g));
}

DiagnosticProfiles prepare_identity_diagnostics(const Grid& sim_grid) {
  return common_profiles(sim_grid, false, GridFunction(sim_grid, Parity::odd),
                         GridFunction(sim_grid, Parity::odd));
}

Decomposition decompose(const FieldState& s, const DiagnosticProfiles& p) {
  s.phi1.check_same(p.y1);
  s.phi2.check_same(p.y1);
  if (!p.has_mode) return {ModeState{}, s.phi1, s.phi2, s.phi1, s.phi2};
  const double mu = ModelConstants::mu;
  const double z1 = inner(s.phi1, p.y1) / p.y1_norm_sq;
  const double z2 = inner(s.phi2, p.y1) / (mu * p.y1_norm_sq);
  const ModeState m = ModeState::from(z1, z2);
  GridFunction u1 = s.phi1 - z1 * p.y1;
  GridFunction u2 = s.phi2 - (mu * z2) * p.y1;
  GridFunction v1 = u1 + m.z_sq * p.q;
  GridFunction v2 = u2;
  return {m, std::move(u1), std::move(u2), std::move(v1), std::move(v2)};
}

VirialValues virial_functionals(const GridFunction& v1, const GridFunction& v2,
                                const ModeState& mode, const DiagnosticProfiles& p, double kappa0,
                                double sigma) {
  v1.check_same(p.y1);
  v2.check_same(p.y1);
  const Grid& g = p.grid;
  const GridFunction dv1 = derivative(v1);
  const std::size_t n = g.size();
  std::vector<double> iv(n), hv(n), cv(n), gv2(n), gv1(n);
  for (std::size_t j = 0; j < n; ++j) {
    iv[j] = (p.psi[j] * dv1[j] + 0.5 * p.psi_prime[j] * v1[j]) * v2[j];
    hv[j] = (dv1[j] * dv1[j] + 2.0 * v1[j] * v1[j] + v2[j] * v2[j]) * p.omega[j];
    cv[j] = p.omega[j] * v1[j] * v2[j];
    gv2[j] = v2[j] * p.g[j];
    gv1[j] = v1[j] * p.g[j];
  }
  VirialValues r;
  const double mu = ModelConstants::mu;
  r.I = integrate(g, iv);
  r.J = mode.alpha * integrate(g, gv2) - 2.0 * mu * mode.beta * integrate(g, gv1);
  r.cross = integrate(g, cv);
  r.K = kappa0 / (4.0 * mu) * mode.gamma - (r.I + r.J) + 2.0 * sigma * r.cross;
  r.H_loc = integrate(g, hv);
  return r;
}

DiagnosticsRecord make_record(const FieldState& s, const EnergyLedger& e,
                              const DiagnosticProfiles& p, double kappa0, double sigma) {
  const Decomposition d = decompose(s, p);
  const VirialValues v = virial_functionals(d.v1, d.v2, d.mode, p, kappa0, sigma);
  DiagnosticsRecord r{};
  r.t = s.t;
  r.mode = d.mode;
  r.u_norms = weighted_norms(d.u1, d.u2);
  r.v_norms = weighted_norms(d.v1, d.v2);
  r.I = v.I;
  r.J = v.J;
  r.K = v.K;
  r.H_loc = v.H_loc;
  r.cross = v.cross;
  r.E_pert = e.E_pert;
  r.E_full = e.E_full;
  r.energy_norm_sq = energy_norm_sq(s);
  return r;
}

void write_diagnostics_csv(std::ostream& os, const DiagnosticsSeries& series) {
  os << "t,z1,z2,alpha,beta,gamma,I,J,K,H_loc,h1w_v1,l2w_v2,E_pert,E_full,h1w_u1,l2w_u2,cross_w,"
        "energy_norm_sq\n";
  for (const auto& r : series) {
    const double cols[] = {r.t,           r.mode.z1,         r.mode.z2,         r.mode.alpha,
                           r.mode.beta,   r.mode.gamma,      r.I,               r.J,
                           r.K,           r.H_loc,           r.v_norms.h1_omega, r.v_norms.l2_omega,
                           r.E_pert,      r.E_full,          r.u_norms.h1_omega, r.u_norms.l2_omega,
                           r.cross,       r.energy_norm_sq};
    bool first = true;
    for (double c : cols) {
      if (!first) os << ',';
      os << format_double(c);
      first = false;
    }
    os << '\n';
  }
}

namespace {

double sample_spacing(const DiagnosticsSeries& s) {
  const double dt = s[1].t - s[0].t;
  for (std::size_t i = 2; i < s.size(); ++i) {
    if (std::abs((s[i].t - s[i - 1].t) - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw std::invalid_argument("diagnostics series is not uniformly sampled");
    }
  }
  return dt;
}

// Centered 5-point derivative (3-point next to the ends).
std::vector<double> time_derivative(const std::vector<double>& x, double dt) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      d[i] = (x[i - 2] - 8.0 * x[i - 1] + 8.0 * x[i + 1] - x[i + 2]) / (12.0 * dt);
    } else {
      d[i] = (x[i + 1] - x[i - 1]) / (2.0 * dt);
    }
  }
  return d;
}

template <typename F>
std::vector<double> column(const DiagnosticsSeries& s, F&& f) {
  std::vector<double> v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) v[i] = f(s[i]);
  return v;
}

// Smallest C ≥ 0 with deficit_i ≤ C·scale_i on all samples.
FittedConstant fit(const std::vector<double>& deficit, const std::vector<double>& scale,
                   const std::vector<std::size_t>& idx) {
  FittedConstant c{0.0, idx.size()};
  for (std::size_t i : idx) {
    if (deficit[i] <= 0.0) continue;
    if (scale[i] <= 0.0) {
      c.C = INFINITY;
      continue;
    }
    c.C = std::max(c.C, deficit[i] / scale[i]);
  }
  return c;
}

}  // namespace

MonitorReport inequality_monitors(const DiagnosticsSeries& s, double epsilon, double kappa0,
                                  double window_end) {
  if (s.size() < 5) throw std::invalid_argument("diagnostics series too short for monitors");
  const double dt = sample_spacing(s);
  const double mu = ModelConstants::mu;
  const std::size_t n = s.size();

  const auto dK = time_derivative(column(s, [](auto& r) { return r.K; }), dt);
  const auto dgamma = time_derivative(column(s, [](auto& r) { return r.mode.gamma; }), dt);
  const auto dIJ = time_derivative(column(s, [](auto& r) { return r.I + r.J; }), dt);
  const auto dcross = time_derivative(column(s, [](auto& r) { return r.cross; }), dt);

  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (s[i].t <= window_end) idx.push_back(i);
  }

  MonitorReport m{};
  m.epsilon = epsilon;
  m.window_end = window_end;
  m.kappa0 = kappa0;

  std::vector<double> z4(n), v1w(n), v2w(n);
  for (std::size_t i = 0; i < n; ++i) {
    z4[i] = s[i].mode.z_sq * s[i].mode.z_sq;
    v1w[i] = s[i].v_norms.h1_omega;
    v2w[i] = s[i].v_norms.l2_omega;
  }

  // d𝓚/dt against |z|⁴ + ‖v‖²_ω
  std::vector<double> ratios;
  std::size_t positive = 0;
  for (std::size_t i : idx) {
    const double rhs = z4[i] + v1w[i] + v2w[i];
    if (dK[i] > 0.0) ++positive;
    if (rhs > 0.0) ratios.push_back(dK[i] / rhs);
  }
  // largest c that still holds on at least 95% of the monitored samples
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    m.dK_c = ratios[static_cast<std::size_t>(0.05 * static_cast<double>(ratios.size()))];
  }
  std::size_t holding = 0;
  if (m.dK_c > 0.0) {
    for (std::size_t i : idx) {
      if (dK[i] >= m.dK_c * (z4[i] + v1w[i] + v2w[i])) ++holding;
    }
  }
  m.dK_fraction = idx.empty() ? 0.0 : static_cast<double>(holding) / static_cast<double>(idx.size());
  m.dK_positive_fraction =
      idx.empty() ? 0.0 : static_cast<double>(positive) / static_cast<double>(idx.size());

  std::vector<double> def(n), scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ModeState& z = s[i].mode;
    def[i] = 2.0 * mu * (z.beta * z.beta - z.alpha * z.alpha) - dgamma[i];
    scale[i] = epsilon * (z4[i] + v1w[i]);
  }
  m.c_gamma = fit(def, scale, idx);
  for (std::size_t i = 0; i < n; ++i) {
    const ModeState& z = s[i].mode;
    def[i] = kappa0 * (z.alpha * z.alpha + v1w[i]) + dIJ[i];
    scale[i] = epsilon * (z4[i] + v2w[i]);
  }
  m.c_virial = fit(def, scale, idx);
  for (std::size_t i = 0; i < n; ++i) {
    def[i] = v2w[i] - 2.0 * dcross[i];
    scale[i] = z4[i] + v1w[i];
  }
  m.c_cross = fit(def, scale, idx);

  // Partial time integrals of |z|⁴ + ‖v‖²_ω.
  const double T = s.back().t - s.front().t;
  std::vector<double> cumulative(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double a = z4[i - 1] + v1w[i - 1] + v2w[i - 1];
    const double b = z4[i] + v1w[i] + v2w[i];
    cumulative[i] = cumulative[i - 1] + 0.5 * dt * (a + b);
  }
  const double eps2 = epsilon * epsilon;
  for (int q = 1; q <= 4; ++q) {
    const double tq = s.front().t + 0.25 * q * T;
    std::size_t i = 0;
    while (i + 1 < n && s[i + 1].t <= tq + 1e-9) ++i;
    m.partial_integral_t.push_back(s[i].t);
    m.partial_integral_over_eps2.push_back(eps2 > 0.0 ? cumulative[i] / eps2 : 0.0);
  }
  double early = 0.0, late = 0.0;
  std::size_t ne = 0, nl = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = z4[i] + v1w[i] + v2w[i];
    if (s[i].t <= s.front().t + 0.25 * T) {
      early += v;
      ++ne;
    } else if (s[i].t >= s.front().t + 0.75 * T) {
      late += v;
      ++nl;
    }
  }
  m.integrand_late_to_early =
      (ne && nl && early > 0.0) ? (late / static_cast<double>(nl)) / (early / static_cast<double>(ne))
                                : 0.0;
  return m;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::decaying: return "decaying";
    case Verdict::non_decaying: return "non_decaying";
    case Verdict::inconclusive: break;
  }
  return "inconclusive";
}

std::optional<double> detect_period(const std::vector<double>& values, double sample_dt) {
  const std::size_t n = values.size();
  if (n < 8) return std::nullopt;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> x(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = values[i] - mean;
    var += x[i] * x[i];
  }
  if (!(var > 0.0)) return std::nullopt;
  const std::size_t max_lag = n / 2;
  std::vector<double> acf(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) s += x[i] * x[i + k];
    // unbiased normalization keeps later peaks comparable
    acf[k] = s / var * static_cast<double>(n) / static_cast<double>(n - k);
  }
  std::size_t k = 1;
  while (k <= max_lag && acf[k] > 0.0) ++k;
  if (k > max_lag) return std::nullopt;
  double top = acf[k];
  for (std::size_t j = k; j <= max_lag; ++j) top = std::max(top, acf[j]);
  if (top < 0.3) return std::nullopt;
  // first local maximum close to the highest one, so multiples of the
  // period are not picked up
  std::size_t best = 0;
  for (std::size_t j = k + 1; j < max_lag; ++j) {
    if (acf[j] >= acf[j - 1] && acf[j] >= acf[j + 1] && acf[j] >= 0.9 * top) {
      best = j;
      break;
    }
  }
  if (best == 0) return std::nullopt;
  // parabolic refinement around the discrete maximum
  const double ym = acf[best - 1], y0 = acf[best], yp = acf[best + 1];
  const double den = ym - 2.0 * y0 + yp;
  const double shift = den != 0.0 ? 0.5 * (ym - yp) / den : 0.0;
  return (static_cast<double>(best) + shift) * sample_dt;
}

VerdictReport decay_verdict(const DiagnosticsSeries& s, std::size_t min_samples) {
  if (s.size() < min_samples) throw std::invalid_argument("run too short for a decay verdict");
  const double dt = sample_spacing(s);
  const double t0 = s.front().t;
  const double T = s.back().t - t0;
  VerdictReport r{};
  double hi = 0.0, hf = 0.0, zi = 0.0, zf = 0.0;
  std::size_t ni = 0, nf = 0;
  r.H_final_min = INFINITY;
  for (const auto& rec : s) {
    const double z = std::sqrt(rec.mode.z_sq);
    if (rec.t <= t0 + 0.1 * T) {
      hi += rec.H_loc;
      zi += z;
      ++ni;
    }
    if (rec.t >= t0 + 0.9 * T) {
      hf += rec.H_loc;
      zf += z;
      ++nf;
      r.H_final_min = std::min(r.H_final_min, rec.H_loc);
    }
  }
  r.H_initial_mean = hi / static_cast<double>(ni);
  r.H_final_mean = hf / static_cast<double>(nf);
  r.z_initial_mean = zi / static_cast<double>(ni);
  r.z_final_mean = zf / static_cast<double>(nf);
  r.period = detect_period(column(s, [](auto& rec) { return rec.H_loc; }), dt);

  // a zero run decays vacuously
  const auto shrinks = [](double fin, double ini) { return fin < 0.25 * ini || fin == 0.0; };
  if (shrinks(r.H_final_mean, r.H_initial_mean) && shrinks(r.z_final_mean, r.z_initial_mean)) {
    r.verdict = Verdict::decaying;
  } else if (r.H_final_min > 0.5 * r.H_initial_mean && r.period.has_value()) {
    r.verdict = Verdict::non_decaying;
  } else {
    r.verdict = Verdict::inconclusive;
  }
  return r;
}

}  // namespace kinkstab
