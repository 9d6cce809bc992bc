#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "commands.hpp"

using namespace kinkstab;

int main(int argc, char** argv) {
  CLI::App app{"Kink asymptotic-stability toolkit: profiles, verification, simulation"};
  app.require_subcommand(1);

  std::string config_path, out_dir, scenario;
  std::optional<double> grid_L, tolerance;
  std::optional<int> grid_n;
  bool print_config = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI config file");
    sub->add_option("--out", out_dir, "output directory (overrides KINKSTAB_OUT_DIR)");
    sub->add_option("--grid-L", grid_L, "grid half-width (profile grid for profiles/verify, dynamics grid otherwise)");
    sub->add_option("--grid-n", grid_n, "grid node count, odd");
    sub->add_option("--tolerance", tolerance, "scale factor applied to every verification tolerance");
    sub->add_option("--scenario", scenario,
                    "built-in scenario: phi4-modekick-EPS, phi4-gaussian-EPS, sg-wobbler-ALPHA");
    sub->add_flag("--print-config", print_config, "print the resolved config and exit");
  };
  auto* profiles = app.add_subcommand("profiles", "build q, g, Z1#, h# and write profile CSV + constants JSON");
  auto* verify = app.add_subcommand("verify", "run the golden-constant and coercivity checks");
  auto* simulate = app.add_subcommand("simulate", "run one scenario with diagnostics");
  auto* sweep = app.add_subcommand("sweep", "run one scenario for several amplitudes concurrently");
  for (auto* s : {profiles, verify, simulate, sweep}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  cli::Invocation inv;
  inv.subcommand = app.get_subcommands().front()->get_name();
  const bool dynamics = inv.subcommand == "simulate" || inv.subcommand == "sweep";
  try {
    AppConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
    if (!scenario.empty()) apply_scenario(cfg, scenario);
    if (grid_L || grid_n) {
      Grid& g = dynamics ? cfg.sim.grid : cfg.profiles.grid;
      const double L = grid_L.value_or(g.half_width());
      const int n = grid_n.value_or(static_cast<int>(g.size()));
      if (n < 3) throw ConfigError("--grid-n must be >= 3");
      g = Grid(L, static_cast<std::size_t>(n));
    }
    if (tolerance) {
      if (!(*tolerance > 0.0)) throw ConfigError("--tolerance must be positive");
      cfg.tolerance_scale = *tolerance;
    }
    inv.out_dir = cfg.out_dir;
    if (const char* env = std::getenv("KINKSTAB_OUT_DIR"); env && *env) inv.out_dir = env;
    if (!out_dir.empty()) inv.out_dir = out_dir;
    inv.config = std::move(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  }
  if (print_config) {
    std::cout << render_config(inv.config);
    return cli::kOk;
  }

  try {
    if (inv.subcommand == "profiles") return cli::cmd_profiles(inv);
    if (inv.subcommand == "verify") return cli::cmd_verify(inv);
    if (inv.subcommand == "simulate") return cli::cmd_simulate(inv);
    return cli::cmd_sweep(inv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kFailure;
  }
}
