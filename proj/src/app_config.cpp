#include "kinkstab/app_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace kinkstab {

AppConfig default_config() {
  AppConfig c;
  c.sim.grid = Grid(200.0, 8001);
  return c;
}

namespace {

double to_number(const std::string& key, const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("invalid number for " + key + ": '" + s + "'");
  return v;
}

int to_int(const std::string& key, const std::string& s) {
  int v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("invalid integer for " + key + ": '" + s + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("invalid boolean for " + key + ": '" + s + "'");
}

const char* to_string(QuadratureRule r) { return r == QuadratureRule::simpson ? "simpson" : "trapezoid"; }

template <typename E, std::size_t N>
E to_enum(const std::string& key, const std::string& s, const E (&options)[N]) {
  for (E e : options) {
    if (s == to_string(e)) return e;
  }
  throw ConfigError("invalid value for " + key + ": '" + s + "'");
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

std::vector<double> split_numbers(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty entry in " + key);
    out.push_back(to_number(key, item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw ConfigError(key + " must list at least one value");
  return out;
}

struct Key {
  const char* section;
  const char* name;
  const char* doc;
  std::function<std::string(const AppConfig&)> get;
  std::function<void(AppConfig&, const std::string&, const std::string&)> set;
  bool documented = true;
};

std::string num(double v) { return format_double(v); }

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      {"profiles", "L", "half-width of the profile grid",
       [](const AppConfig& c) { return num(c.profiles.grid.half_width()); },
       [](AppConfig& c, const std::string& n, const std::string& v) {
         c.profiles.grid = Grid(to_number(n, v), c.profiles.grid.size());
       }},
      {"profiles", "n", "number of profile grid nodes (odd)",
       [](const AppConfig& c) { return std::to_string(c.profiles.grid.size()); },
       [](AppConfig& c, const std::string& n, const std::string& v) {
         const int m = to_int(n, v);
         if (m < 3) throw ConfigError(n + " must be >= 3");
         c.profiles.grid = Grid(c.profiles.grid.half_width(), static_cast<std::size_t>(m));
       }},
      {"profiles", "sharp_potential", "v2_only | full_v",
       [](const AppConfig& c) { return std::string(to_string(c.profiles.sharp_potential)); },
       [](AppConfig& c, const std::string& n, const std::string& v) {
         c.profiles.sharp_potential =
             to_enum(n, v, {SharpPotential::v2_only, SharpPotential::full_v});
       }},
      {"profiles", "rule", "simpson | trapezoid",
       [](const AppConfig& c) { return std::string(to_string(c.profiles.rule)); },
       [](AppConfig& c, const std::string& n, const std::string& v) {
         c.profiles.rule = to_enum(n, v, {QuadratureRule::simpson, QuadratureRule::trapezoid});
       }},
      {"profiles", "rtol", "shooting relative tolerance",
       [](const AppConfig& c) { return num(c.profiles.shooting.rtol); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.profiles.shooting.rtol = to_number(n, v); }},
      {"profiles", "atol", "shooting absolute tolerance",
       [](const AppConfig& c) { return num(c.profiles.shooting.atol); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.profiles.shooting.atol = to_number(n, v); }},
      {"profiles", "q_shoot_radius", "start of the inward shot for q",
       [](const AppConfig& c) { return num(c.profiles.shooting.q_shoot_radius); },
       [](AppConfig& c, const std::string& n, const std::string& v) {
         c.profiles.shooting.q_shoot_radius = to_number(n, v);
       }},
      {"profiles", "g_tail_tolerance", "max |g| allowed at the grid end",
       [](const AppConfig& c) { return num(c.profiles.g_tail_tolerance); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.profiles.g_tail_tolerance = to_number(n, v); }},
      {"coercivity", "half_width", "half-line length of the Rayleigh-quotient mesh",
       [](const AppConfig& c) { return num(c.coercivity.half_width); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.coercivity.half_width = to_number(n, v); }},
      {"coercivity", "spacing", "mesh spacing",
       [](const AppConfig& c) { return num(c.coercivity.spacing); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.coercivity.spacing = to_number(n, v); }},
      {"coercivity", "potential", "v2_only | full_v",
       [](const AppConfig& c) { return std::string(to_string(c.coercivity.potential)); },
       [](AppConfig& c, const std::string& n, const std::string& v) {
         c.coercivity.potential = to_enum(n, v, {SharpPotential::v2_only, SharpPotential::full_v});
       }},
      {"simulation", "model", "phi4_perturbation | sine_gordon_full",
       [](const AppConfig& c) { return std::string(to_string(c.sim.model)); },
       [](AppConfig& c, const std::string& n, const std::string& v) {
         c.sim.model = to_enum(n, v, {Model::phi4_perturbation, Model::sine_gordon_full});
       }},
      {"simulation", "L", "half-width of the dynamics grid",
       [](const AppConfig& c) { return num(c.sim.grid.half_width()); },
       [](AppConfig& c, const std::string& n, const std::string& v) {
         c.sim.grid = Grid(to_number(n, v), c.sim.grid.size());
       }},
      {"simulation", "n", "number of dynamics grid nodes (odd)",
       [](const AppConfig& c) { return std::to_string(c.sim.grid.size()); },
       [](AppConfig& c, const std::string& n, const std::string& v) {
         const int m = to_int(n, v);
         if (m < 3) throw ConfigError(n + " must be >= 3");
         c.sim.grid = Grid(c.sim.grid.half_width(), static_cast<std::size_t>(m));
       }},
      {"simulation", "dt", "time step, at most 0.9 h",
       [](const AppConfig& c) { return num(c.sim.dt); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.sim.dt = to_number(n, v); }},
      {"simulation", "T", "final time",
       [](const AppConfig& c) { return num(c.sim.T); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.sim.T = to_number(n, v); }},
      {"simulation", "boundary", "sponge | dirichlet",
       [](const AppConfig& c) { return std::string(to_string(c.sim.boundary)); },
       [](AppConfig& c, const std::string& n, const std::string& v) {
         c.sim.boundary = to_enum(n, v, {Boundary::sponge, Boundary::dirichlet});
       }},
      {"simulation", "sponge_width", "width of the damping band, below L/4",
       [](const AppConfig& c) { return num(c.sim.sponge_width); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.sim.sponge_width = to_number(n, v); }},
      {"simulation", "sponge_strength", "peak damping rate",
       [](const AppConfig& c) { return num(c.sim.sponge_strength); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.sim.sponge_strength = to_number(n, v); }},
      {"simulation", "output_stride", "steps between diagnostics samples",
       [](const AppConfig& c) { return std::to_string(c.sim.output_stride); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.sim.output_stride = to_int(n, v); }},
      {"initial", "kind", "zero | mode_kick | gaussian_odd | wobbler_snapshot",
       [](const AppConfig& c) { return std::string(to_string(c.sim.initial.kind)); },
       [](AppConfig& c, const std::string& n, const std::string& v) {
         c.sim.initial.kind = to_enum(n, v,
                                      {InitialKind::zero, InitialKind::mode_kick,
                                       InitialKind::gaussian_odd, InitialKind::wobbler_snapshot});
       }},
      {"initial", "amplitude", "epsilon: mode amplitude or H1xL2 size of the bump",
       [](const AppConfig& c) { return num(c.sim.initial.amplitude); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.sim.initial.amplitude = to_number(n, v); }},
      {"initial", "kick_velocity", "mode_kick in the velocity instead of the position",
       [](const AppConfig& c) { return std::string(c.sim.initial.kick_velocity ? "true" : "false"); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.sim.initial.kick_velocity = to_bool(n, v); }},
      {"initial", "gaussian_width", "w in x exp(-x^2/w^2)",
       [](const AppConfig& c) { return num(c.sim.initial.gaussian_width); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.sim.initial.gaussian_width = to_number(n, v); }},
      {"initial", "alpha", "wobbler frequency, 0 < alpha < 1",
       [](const AppConfig& c) { return num(c.sim.initial.alpha); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.sim.initial.alpha = to_number(n, v); }},
      {"initial", "t0", "wobbler snapshot time",
       [](const AppConfig& c) { return num(c.sim.initial.t0); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.sim.initial.t0 = to_number(n, v); }},
      {"diagnostics", "kappa0", "kappa0 in K; 0 uses the discrete D# minimum",
       [](const AppConfig& c) { return num(c.diagnostics.kappa0); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.diagnostics.kappa0 = to_number(n, v); }},
      {"diagnostics", "sigma_ratio", "sigma = sigma_ratio * kappa0",
       [](const AppConfig& c) { return num(c.diagnostics.sigma_ratio); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.diagnostics.sigma_ratio = to_number(n, v); }},
      {"diagnostics", "window_end", "last monitored time; 0 uses L - sponge_width",
       [](const AppConfig& c) { return num(c.diagnostics.window_end); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.diagnostics.window_end = to_number(n, v); }},
      {"diagnostics", "snapshot_every", "time between field snapshots; 0 disables",
       [](const AppConfig& c) { return num(c.diagnostics.snapshot_every); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.diagnostics.snapshot_every = to_number(n, v); }},
      {"sweep", "amplitudes", "comma-separated epsilon values",
       [](const AppConfig& c) { return join(c.sweep.amplitudes); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.sweep.amplitudes = split_numbers(n, v); }},
      {"sweep", "threads", "concurrent runs; 0 runs all at once",
       [](const AppConfig& c) { return std::to_string(c.sweep.threads); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.sweep.threads = to_int(n, v); }},
      {"verify", "tolerance_scale", "multiplies every verification tolerance",
       [](const AppConfig& c) { return num(c.tolerance_scale); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.tolerance_scale = to_number(n, v); }},
      {"output", "dir", "output directory (KINKSTAB_OUT_DIR and --out override it)",
       [](const AppConfig& c) { return c.out_dir; },
       [](AppConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
      {"debug", "a_offset", "added to a before g is built",
       [](const AppConfig& c) { return num(c.profiles.a_offset); },
       [](AppConfig& c, const std::string& n, const std::string& v) { c.profiles.a_offset = to_number(n, v); },
       false},
  };
  return k;
}

const Key* find_key(const std::string& section, const std::string& name) {
  for (const auto& k : keys()) {
    if (section == k.section && name == k.name) return &k;
  }
  return nullptr;
}

}  // namespace

AppConfig parse_config(const std::string& text, AppConfig base) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw ConfigError("key outside a section: " + section);
    for (const auto& [name, value] : body) {
      const Key* k = find_key(section, name);
      if (!k) throw ConfigError("unknown config key: " + section + "." + name);
      try {
        k->set(base, section + "." + name, value.data());
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError(section + "." + name + ": " + e.what());
      }
    }
  }
  return base;
}

AppConfig load_config(const std::string& path, AppConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

void apply_scenario(AppConfig& cfg, const std::string& name) {
  const auto dash = name.rfind('-');
  if (dash == std::string::npos) throw ConfigError("unknown scenario: " + name);
  const std::string family = name.substr(0, dash);
  double value = 0.0;
  try {
    value = to_number("scenario", name.substr(dash + 1));
  } catch (const ConfigError&) {
    throw ConfigError("unknown scenario: " + name);
  }
  InitialDataSpec& in = cfg.sim.initial;
  if (family == "phi4-modekick") {
    cfg.sim.model = Model::phi4_perturbation;
    in.kind = InitialKind::mode_kick;
    in.amplitude = value;
  } else if (family == "phi4-gaussian") {
    cfg.sim.model = Model::phi4_perturbation;
    in.kind = InitialKind::gaussian_odd;
    in.amplitude = value;
  } else if (family == "sg-wobbler") {
    if (!(value > 0.0 && value < 1.0)) throw ConfigError("wobbler alpha must lie in (0, 1): " + name);
    cfg.sim.model = Model::sine_gordon_full;
    in.kind = InitialKind::wobbler_snapshot;
    in.alpha = value;
  } else {
    throw ConfigError("unknown scenario: " + name);
  }
  cfg.scenario = name;
}

std::vector<std::pair<std::string, std::string>> flatten_config(const AppConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : keys()) {
    if (k.documented) out.emplace_back(std::string(k.section) + "." + k.name, k.get(cfg));
  }
  return out;
}

std::string render_config(const AppConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& k : keys()) {
    if (!k.documented) continue;
    if (section != k.section) {
      if (!section.empty()) os << '\n';
      section = k.section;
      os << '[' << section << "]\n";
    }
    os << "; " << k.doc << '\n' << k.name << " = " << k.get(cfg) << '\n';
  }
  return os.str();
}

}  // namespace kinkstab
