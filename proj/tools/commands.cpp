#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>

#include "kinkstab/diagnostics.hpp"
#include "kinkstab/spectral.hpp"

#ifndef KINKSTAB_VERSION
#define KINKSTAB_VERSION "unknown"
#endif

namespace kinkstab::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

// FNV-1a over the raw bytes of the profile values.
std::uint64_t checksum(std::initializer_list<const GridFunction*> fs) {
  std::uint64_t h = 1469598103934665603ull;
  for (const GridFunction* f : fs) {
    for (double v : f->values()) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &v, sizeof(double));
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
      }
    }
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

struct Manifest {
  std::string subcommand;
  const AppConfig* cfg;
  std::string profile_checksum;
  std::vector<std::string> outputs;
  Clock::time_point start = Clock::now();

  void write(const fs::path& dir, int status) const {
    json m;
    m["subcommand"] = subcommand;
    m["code_version"] = KINKSTAB_VERSION;
    m["scenario"] = cfg->scenario;
    json c = json::object();
    for (const auto& [k, v] : flatten_config(*cfg)) c[k] = v;
    m["config"] = c;
    m["profile_checksum"] = profile_checksum;
    m["outputs"] = outputs;
    m["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
    m["exit_status"] = status;
    write_json(dir / "manifest.json", m);
  }
};

json constants_json(const ProfileSet& p) {
  json j;
  j["grid"] = {{"L", p.grid.half_width()}, {"n", p.grid.size()}, {"h", p.grid.spacing()}};
  j["sharp_potential"] = to_string(p.sharp_potential);
  j["a"] = p.a;
  j["a_denominator"] = p.a_denominator;
  j["b"] = p.b;
  j["f_g"] = p.f_g;
  j["hsharp_h"] = p.hsharp_h;
  j["z1_z1sharp"] = p.z1_z1sharp;
  j["zeta_f_z1sharp"] = p.zeta_f_z1sharp;
  j["q_prime0"] = p.q_prime0;
  j["g_prime0"] = p.g_prime0;
  j["z1sharp_prime0"] = p.z1sharp_prime0;
  j["hsharp_prime0"] = p.hsharp_prime0;
  j["z1_prime0_analytic"] = cf::internal_mode_prime(0.0);  // Z₁′(0) = Y₁′(0)
  return j;
}

// Leading token of a NumericalError message ("g_schwartz_decay: ...").
std::string check_name_of(const std::string& what) {
  const auto colon = what.find(':');
  if (colon == std::string::npos || colon == 0) return "numerical_error";
  const std::string head = what.substr(0, colon);
  if (head.find(' ') != std::string::npos) return "numerical_error";
  return head;
}

struct Check {
  std::string name;
  std::string kind;  // within, less_than, positive, at_least, flag
  double value;
  double target;
  double tolerance;
  bool pass;
};

class CheckList {
 public:
  explicit CheckList(double scale) : scale_(scale) {}
  void within(const std::string& n, double v, double target, double tol) {
    add({n, "within", v, target, tol * scale_, std::abs(v - target) <= tol * scale_});
  }
  void less_than(const std::string& n, double v, double bound) {
    add({n, "less_than", v, bound, 0.0, v < bound});
  }
  void positive(const std::string& n, double v) { add({n, "positive", v, 0.0, 0.0, v > 0.0}); }
  void at_least(const std::string& n, double v, double bound, double slack) {
    add({n, "at_least", v, bound, slack * scale_, v >= bound - slack * scale_});
  }
  void flag(const std::string& n, bool ok) { add({n, "flag", ok ? 1.0 : 0.0, 1.0, 0.0, ok}); }
  void failed_with(const std::string& n) { add({n, "error", NAN, NAN, 0.0, false}); }

  bool all_passed() const {
    for (const auto& c : checks_) {
      if (!c.pass) return false;
    }
    return true;
  }
  std::vector<std::string> failed() const {
    std::vector<std::string> out;
    for (const auto& c : checks_) {
      if (!c.pass) out.push_back(c.name);
    }
    return out;
  }
  json to_json() const {
    json a = json::array();
    for (const auto& c : checks_) {
      a.push_back({{"name", c.name},
                   {"kind", c.kind},
                   {"value", number(c.value)},
                   {"target", number(c.target)},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass}});
    }
    return a;
  }

 private:
  void add(Check c) { checks_.push_back(std::move(c)); }
  double scale_;
  std::vector<Check> checks_;
};

double resolve_kappa0(const AppConfig& cfg, const ProfileSet& p) {
  if (cfg.diagnostics.kappa0 > 0.0) return cfg.diagnostics.kappa0;
  return coercivity_D_sharp(p.a, p.b, p.f_g, p.hsharp_h, cfg.coercivity).joint.constrained_min;
}

json coercivity_json(const CoercivityReport& r) {
  return {{"form", r.form_id},
          {"constrained_min", r.constrained_min},
          {"unconstrained_min", r.unconstrained_min},
          {"constraints", r.constraint_set},
          {"half_width", r.half_width},
          {"spacing", r.spacing}};
}

// Everything shared by the runs of one simulate/sweep invocation.
struct RunContext {
  std::optional<ProfileSet> profiles;
  double kappa0 = 0.0;
  double sigma = 0.0;
  std::string checksum;
};

RunContext prepare(const AppConfig& cfg) {
  RunContext ctx;
  ctx.profiles = build_profiles(cfg.profiles);
  ctx.kappa0 = resolve_kappa0(cfg, *ctx.profiles);
  ctx.sigma = cfg.diagnostics.sigma_ratio * ctx.kappa0;
  ctx.checksum = hex(checksum({&ctx.profiles->q, &ctx.profiles->g}));
  return ctx;
}

double monitor_epsilon(const SimConfig& sim, const DiagnosticsSeries& s) {
  if (sim.model == Model::phi4_perturbation && sim.initial.kind != InitialKind::zero) {
    return sim.initial.amplitude;
  }
  return s.empty() ? 0.0 : std::sqrt(s.front().energy_norm_sq);
}

double window_end(const AppConfig& cfg) {
  if (cfg.diagnostics.window_end > 0.0) return cfg.diagnostics.window_end;
  if (cfg.sim.boundary == Boundary::sponge) return cfg.sim.grid.half_width() - cfg.sim.sponge_width;
  return cfg.sim.T;
}

struct RunOutcome {
  int status = kOk;
  std::string error;
  DiagnosticsSeries series;
  double sup_norm = 0.0;
  std::optional<MonitorReport> monitor;
  std::optional<VerdictReport> verdict;
  std::vector<std::string> outputs;
};

void write_snapshot(const fs::path& dir, const FieldState& s, std::vector<std::string>& outputs) {
  char name[64];
  std::snprintf(name, sizeof(name), "snapshot_t%09.3f.csv", s.t);
  std::ostringstream os;
  os << "x,phi1,phi2\n";
  const Grid& g = s.phi1.grid();
  for (std::size_t j = 0; j < g.size(); ++j) {
    os << format_double(g.x(j)) << ',' << format_double(s.phi1[j]) << ','
       << format_double(s.phi2[j]) << '\n';
  }
  write_text(dir / "snapshots" / name, os.str());
  outputs.push_back((fs::path("snapshots") / name).string());
}

json monitor_json(const MonitorReport& m) {
  auto fitted = [](const FittedConstant& c) { return json{{"C", number(c.C)}, {"samples", c.samples}}; };
  json pi = json::array();
  for (std::size_t i = 0; i < m.partial_integral_t.size(); ++i) {
    pi.push_back({{"t", m.partial_integral_t[i]}, {"integral_over_eps2", m.partial_integral_over_eps2[i]}});
  }
  return {{"epsilon", m.epsilon},
          {"window_end", m.window_end},
          {"kappa0", m.kappa0},
          {"dK_dt", {{"c", m.dK_c}, {"holding_fraction", m.dK_fraction}, {"positive_fraction", m.dK_positive_fraction}}},
          {"gamma_inequality", fitted(m.c_gamma)},
          {"virial_inequality", fitted(m.c_virial)},
          {"cross_inequality", fitted(m.c_cross)},
          {"partial_integrals", pi},
          {"integrand_late_to_early", m.integrand_late_to_early}};
}

json verdict_json(const VerdictReport& v, double alpha) {
  json j{{"verdict", to_string(v.verdict)},
         {"H_initial_mean", v.H_initial_mean},
         {"H_final_mean", v.H_final_mean},
         {"H_final_min", v.H_final_min},
         {"z_initial_mean", v.z_initial_mean},
         {"z_final_mean", v.z_final_mean},
         {"period", v.period ? json(*v.period) : json(nullptr)}};
  if (alpha > 0.0) j["expected_period"] = 2.0 * std::numbers::pi / alpha;
  return j;
}

RunOutcome simulate_one(const AppConfig& cfg, const RunContext& ctx, const fs::path& dir) {
  RunOutcome out;
  const SimConfig& sim = cfg.sim;
  const DiagnosticProfiles dp = sim.model == Model::phi4_perturbation
                                    ? prepare_diagnostics(*ctx.profiles, sim.grid)
                                    : prepare_identity_diagnostics(sim.grid);
  const double snap = cfg.diagnostics.snapshot_every;
  long next_snapshot = 0;
  auto hook = [&](const FieldState& s, const EnergyLedger& e) {
    out.series.push_back(make_record(s, e, dp, ctx.kappa0, ctx.sigma));
    out.sup_norm = std::max(out.sup_norm, std::sqrt(out.series.back().energy_norm_sq));
    if (snap > 0.0 && s.t + 1e-9 >= static_cast<double>(next_snapshot) * snap) {
      write_snapshot(dir, s, out.outputs);
      next_snapshot = static_cast<long>(std::floor((s.t + 1e-9) / snap)) + 1;
    }
  };
  try {
    run(sim, hook);
  } catch (const SimulationAborted& e) {
    out.status = kFailure;
    out.error = e.what();
    write_snapshot(dir, e.state, out.outputs);
  }

  std::ostringstream csv;
  write_diagnostics_csv(csv, out.series);
  write_text(dir / "diagnostics.csv", csv.str());
  out.outputs.push_back("diagnostics.csv");
  if (out.status != kOk) return out;

  try {
    out.monitor = inequality_monitors(out.series, monitor_epsilon(sim, out.series), ctx.kappa0, window_end(cfg));
    write_json(dir / "monitor.json", monitor_json(*out.monitor));
    out.outputs.push_back("monitor.json");
  } catch (const std::invalid_argument& e) {
    std::cerr << "warning: monitors skipped: " << e.what() << '\n';
  }
  try {
    out.verdict = decay_verdict(out.series);
    const double alpha = sim.initial.kind == InitialKind::wobbler_snapshot ? sim.initial.alpha : 0.0;
    write_json(dir / "verdict.json", verdict_json(*out.verdict, alpha));
    out.outputs.push_back("verdict.json");
  } catch (const std::invalid_argument& e) {
    std::cerr << "warning: verdict skipped: " << e.what() << '\n';
  }
  return out;
}

}  // namespace

int cmd_profiles(const Invocation& inv) {
  const fs::path dir(inv.out_dir);
  Manifest man{"profiles", &inv.config, "", {}};
  std::optional<ProfileSet> built;
  try {
    built = build_profiles(inv.config.profiles);
  } catch (const NumericalError& e) {
    std::cerr << "profiles failed: " << e.what() << '\n';
    man.write(dir, kFailure);
    return kFailure;
  }
  const ProfileSet& p = *built;
  std::ostringstream csv;
  csv << "x,q,g,z1sharp,hsharp,h\n";
  for (std::size_t j = 0; j < p.grid.size(); ++j) {
    csv << format_double(p.grid.x(j)) << ',' << format_double(p.q[j]) << ',' << format_double(p.g[j])
        << ',' << format_double(p.z1sharp[j]) << ',' << format_double(p.hsharp[j]) << ','
        << format_double(p.h_fn[j]) << '\n';
  }
  write_text(dir / "profiles.csv", csv.str());
  write_json(dir / "constants.json", constants_json(p));
  man.profile_checksum = hex(checksum({&p.q, &p.g, &p.z1sharp, &p.hsharp}));
  man.outputs = {"profiles.csv", "constants.json"};
  man.write(dir, kOk);
  std::cout << "a = " << format_double(p.a) << "\n" << "wrote " << (dir / "profiles.csv").string() << '\n';
  return kOk;
}

int cmd_verify(const Invocation& inv) {
  const AppConfig& cfg = inv.config;
  const fs::path dir(inv.out_dir);
  Manifest man{"verify", &cfg, "", {"verification.json"}};
  CheckList checks(cfg.tolerance_scale);
  json report;
  report["tolerance_scale"] = cfg.tolerance_scale;

  const FgrReport fgr = fgr_constants(cfg.profiles.grid);
  checks.within("fgr_basic", fgr.fgr_basic, -0.222, 5e-3);
  checks.within("fgr_modified", fgr.fgr_modified, -0.218, 5e-3);
  checks.within("psi_f_imk", fgr.psi_f_imk, -0.327, 5e-3);
  report["fgr"] = {{"fgr_basic", fgr.fgr_basic}, {"fgr_modified", fgr.fgr_modified},
                   {"psi_f_imk", fgr.psi_f_imk}, {"quadrature_error_basic", fgr.err_basic},
                   {"quadrature_error_modified", fgr.err_modified},
                   {"quadrature_error_psi_f_imk", fgr.err_psi_f_imk}};

  std::optional<ProfileSet> p;
  try {
    p = build_profiles(cfg.profiles);
  } catch (const NumericalError& e) {
    checks.failed_with(check_name_of(e.what()));
    report["error"] = e.what();
  }
  if (p) {
    checks.within("a", p->a, 0.687271, 1e-4);
    checks.within("f_g", p->f_g, 0.0163, 5e-4);
    checks.within("hsharp_h", p->hsharp_h, 0.0147, 5e-4);
    checks.flag("hsharp_h_ordering", 0.0 < p->hsharp_h && p->hsharp_h < 4.0 * p->f_g);
    checks.within("z1_z1sharp", p->z1_z1sharp, -2.63, 0.05);
    checks.within("z1sharp_prime0", p->z1sharp_prime0, -0.4376, 5e-3);
    checks.within("hsharp_prime0", p->hsharp_prime0, 0.0249, 5e-3);
    checks.within("g_prime0", p->g_prime0, -0.333, 5e-3);
    report["constants"] = constants_json(*p);
    man.profile_checksum = hex(checksum({&p->q, &p->g, &p->z1sharp, &p->hsharp}));
  }

  const MinOverNu mn = min_over_nu(cfg.profiles.grid);
  checks.within("min_over_nu", mn.min_value, 0.04, 5e-3);
  checks.less_than("min_over_nu_below_1_14", mn.min_value, 1.0 / 14.0);
  report["min_over_nu"] = {{"nu_star", mn.nu_star}, {"min_value", mn.min_value}};

  const DominationReport dom = check_potential_domination();
  checks.flag("potential_domination", dom.certified);
  report["domination"] = {{"margin", dom.margin},          {"margin_x", dom.margin_x},
                          {"max_ratio", dom.max_ratio},    {"max_ratio_x", dom.max_ratio_x},
                          {"tail_rate", dom.tail_rate},    {"tail_ratio_bound", dom.tail_ratio_bound},
                          {"certified", dom.certified}};

  const CoercivityReport b = coercivity_B_sharp(cfg.coercivity);
  checks.positive("b_sharp_min", b.constrained_min);
  const CoercivityReport e = energy_lower_bound_check(cfg.coercivity);
  checks.at_least("energy_lower_bound", e.constrained_min, 3.0 / 7.0, 0.01);
  json coerc{{"b_sharp", coercivity_json(b)}, {"energy", coercivity_json(e)}};
  if (p) {
    try {
      const DSharpReport d = coercivity_D_sharp(p->a, p->b, p->f_g, p->hsharp_h, cfg.coercivity);
      checks.positive("d_sharp_joint_min", d.joint.constrained_min);
      checks.flag("d_sharp_reduced_form", d.reduced_positive);
      coerc["d_sharp"] = coercivity_json(d.joint);
      coerc["d_sharp"]["det_2x2"] = d.det_2x2;
      coerc["d_sharp"]["min_eig_2x2"] = d.min_eig_2x2;
      coerc["d_sharp"]["hsharp_h_discrete"] = d.hsharp_h_discrete;
    } catch (const NumericalError& err) {
      checks.failed_with(check_name_of(err.what()));
    }
  }
  report["coercivity"] = coerc;
  report["checks"] = checks.to_json();
  report["all_passed"] = checks.all_passed();
  report["failed"] = checks.failed();
  write_json(dir / "verification.json", report);

  const int status = checks.all_passed() ? kOk : kFailure;
  man.write(dir, status);
  if (status == kOk) {
    std::cout << "all checks passed\n";
  } else {
    std::cerr << "failed checks:";
    for (const auto& n : checks.failed()) std::cerr << ' ' << n;
    std::cerr << '\n';
  }
  return status;
}

int cmd_simulate(const Invocation& inv) {
  const AppConfig& cfg = inv.config;
  const fs::path dir(inv.out_dir);
  try {
    cfg.sim.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kFailure;
  }
  Manifest man{"simulate", &cfg, "", {}};
  const RunContext ctx = prepare(cfg);
  man.profile_checksum = ctx.checksum;
  RunOutcome out = simulate_one(cfg, ctx, dir);
  man.outputs = out.outputs;
  man.write(dir, out.status);
  if (out.status != kOk) {
    std::cerr << "simulation aborted: " << out.error << '\n';
    return out.status;
  }
  if (out.verdict) std::cout << "verdict: " << to_string(out.verdict->verdict) << '\n';
  return kOk;
}

int cmd_sweep(const Invocation& inv) {
  const AppConfig& cfg = inv.config;
  const fs::path dir(inv.out_dir);
  if (cfg.sim.initial.kind == InitialKind::wobbler_snapshot) {
    throw ConfigError("sweep varies initial.amplitude, which the wobbler does not use");
  }
  try {
    cfg.sim.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kFailure;
  }
  Manifest man{"sweep", &cfg, "", {}};
  const RunContext ctx = prepare(cfg);
  man.profile_checksum = ctx.checksum;

  const auto& amps = cfg.sweep.amplitudes;
  std::vector<RunOutcome> results(amps.size());
  const std::size_t batch =
      cfg.sweep.threads > 0 ? static_cast<std::size_t>(cfg.sweep.threads) : amps.size();
  auto subdir = [&](std::size_t i) { return "eps_" + format_double(amps[i]); };
  for (std::size_t start = 0; start < amps.size(); start += batch) {
    std::vector<std::future<RunOutcome>> jobs;
    for (std::size_t i = start; i < std::min(amps.size(), start + batch); ++i) {
      AppConfig run_cfg = cfg;
      run_cfg.sim.initial.amplitude = amps[i];
      jobs.push_back(std::async(std::launch::async, [run_cfg, &ctx, d = dir / subdir(i)] {
        return simulate_one(run_cfg, ctx, d);
      }));
    }
    for (std::size_t k = 0; k < jobs.size(); ++k) results[start + k] = jobs[k].get();
  }

  json runs = json::array();
  int status = kOk;
  double c_min[3] = {INFINITY, INFINITY, INFINITY}, c_max[3] = {0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const RunOutcome& r = results[i];
    json j{{"amplitude", amps[i]}, {"directory", subdir(i)}, {"status", r.status},
           {"sup_norm_over_eps", amps[i] > 0.0 ? number(r.sup_norm / amps[i]) : json(nullptr)}};
    if (r.status != kOk) {
      status = kFailure;
      j["error"] = r.error;
    }
    if (r.verdict) j["verdict"] = to_string(r.verdict->verdict);
    if (r.monitor) {
      j["monitor"] = monitor_json(*r.monitor);
      const double cs[3] = {r.monitor->c_gamma.C, r.monitor->c_virial.C, r.monitor->c_cross.C};
      for (int k = 0; k < 3; ++k) {
        c_min[k] = std::min(c_min[k], cs[k]);
        c_max[k] = std::max(c_max[k], cs[k]);
      }
    }
    for (const auto& o : r.outputs) man.outputs.push_back(subdir(i) + "/" + o);
    runs.push_back(j);
  }
  // max/min of each fitted remainder constant across the sweep; 1 when both vanish
  auto spread = [](double lo, double hi) {
    if (hi == 0.0) return json(1.0);
    return lo > 0.0 ? number(hi / lo) : json(nullptr);
  };
  json summary{{"runs", runs},
               {"remainder_constant_spread",
                {{"gamma_inequality", spread(c_min[0], c_max[0])},
                 {"virial_inequality", spread(c_min[1], c_max[1])},
                 {"cross_inequality", spread(c_min[2], c_max[2])}}}};
  write_json(dir / "sweep.json", summary);
  man.outputs.push_back("sweep.json");
  man.write(dir, status);
  return status;
}

}  // namespace kinkstab::cli
