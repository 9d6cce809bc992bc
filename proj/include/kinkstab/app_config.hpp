#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kinkstab/ode_profiles.hpp"
#include "kinkstab/simulator.hpp"
#include "kinkstab/spectral.hpp"

namespace kinkstab {

/// Bad config file, unknown key, malformed value or unknown scenario.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DiagnosticsOptions {
  double kappa0 = 0.0;         ///< 0: use the discrete D♯ minimum
  double sigma_ratio = 0.05;   ///< σ = sigma_ratio·κ₀
  double window_end = 0.0;     ///< 0: L − sponge_width (first sponge arrival)
  double snapshot_every = 50.0;
};

struct SweepOptions {
  std::vector<double> amplitudes{0.01, 0.025, 0.05};
  int threads = 0;  ///< 0: one per amplitude
};

struct AppConfig {
  ProfileOptions profiles{};
  CoercivityOptions coercivity{};
  SimConfig sim{};
  DiagnosticsOptions diagnostics{};
  SweepOptions sweep{};
  double tolerance_scale = 1.0;
  std::string out_dir = "kinkstab_out";
  std::string scenario;  ///< name of the applied built-in scenario, if any
};

/// Defaults with the dynamics grid at L = 200, h = 0.05.
AppConfig default_config();

/// INI-style file: `[section]` headers, `key = value`, `;` comments.
/// Throws ConfigError on unreadable files, unknown sections or keys and
/// malformed values.
AppConfig load_config(const std::string& path, AppConfig base = default_config());
AppConfig parse_config(const std::string& text, AppConfig base = default_config());

/// phi4-modekick-{eps}, phi4-gaussian-{eps}, sg-wobbler-{alpha}.
void apply_scenario(AppConfig& cfg, const std::string& name);

/// ("section.key", value) for every documented key, in file order.
std::vector<std::pair<std::string, std::string>> flatten_config(const AppConfig& cfg);

/// Canonical text form; parse_config(render_config(c)) == c for every key.
std::string render_config(const AppConfig& cfg);

}  // namespace kinkstab
