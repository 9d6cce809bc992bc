#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "kinkstab/app_config.hpp"

using namespace kinkstab;

TEST_CASE("defaults") {
  const AppConfig c = default_config();
  CHECK(c.sim.grid.half_width() == 200.0);
  CHECK(c.sim.grid.spacing() == doctest::Approx(0.05));
  CHECK(c.tolerance_scale == 1.0);
  CHECK_NOTHROW(c.sim.validate());
  CHECK(c.scenario.empty());
}

TEST_CASE("rendered config parses back to the same values") {
  AppConfig c = default_config();
  c.sim.dt = 0.01;
  c.sim.boundary = Boundary::dirichlet;
  c.profiles.rule = QuadratureRule::trapezoid;
  c.sweep.amplitudes = {0.002, 0.5};
  c.out_dir = "elsewhere";
  const std::string text = render_config(c);
  CHECK(text.find("; ") != std::string::npos);
  CHECK(text.find("a_offset") == std::string::npos);
  const AppConfig back = parse_config(text, AppConfig{});
  CHECK(flatten_config(back) == flatten_config(c));
}

TEST_CASE("partial files override only what they name") {
  const AppConfig c = parse_config(
      "; comment\n"
      "[simulation]\n"
      "T = 12.5\n"
      "model = sine_gordon_full\n"
      "[initial]\n"
      "kind = wobbler_snapshot\n"
      "alpha = 0.8\n"
      "[sweep]\n"
      "amplitudes = 0.1, 0.2\n"
      "[debug]\n"
      "a_offset = 0.1\n");
  CHECK(c.sim.T == 12.5);
  CHECK(c.sim.model == Model::sine_gordon_full);
  CHECK(c.sim.initial.kind == InitialKind::wobbler_snapshot);
  CHECK(c.sim.initial.alpha == 0.8);
  CHECK(c.sweep.amplitudes == std::vector<double>{0.1, 0.2});
  CHECK(c.profiles.a_offset == 0.1);
  CHECK(c.sim.dt == default_config().sim.dt);
}

TEST_CASE("bad input is rejected") {
  CHECK_THROWS_AS(parse_config("[simulation]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nowhere]\nT = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[simulation]\nT = ten\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[simulation]\nT = 1.5x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[simulation]\nboundary = open\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[simulation\nT = 1\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/kinkstab.ini"), ConfigError);
}

TEST_CASE("grid keys") {
  const AppConfig c = parse_config("[simulation]\nL = 50\nn = 1001\n[profiles]\nL = 40\nn = 8001\n");
  CHECK(c.sim.grid == Grid(50.0, 1001));
  CHECK(c.profiles.grid == Grid(40.0, 8001));
  CHECK_THROWS_AS(parse_config("[simulation]\nn = 1000\n"), ConfigError);
}

TEST_CASE("load from file") {
  const auto path = std::filesystem::temp_directory_path() / "kinkstab_test_config.ini";
  std::ofstream(path) << "[verify]\ntolerance_scale = 2\n[output]\ndir = run7\n";
  const AppConfig c = load_config(path.string());
  CHECK(c.tolerance_scale == 2.0);
  CHECK(c.out_dir == "run7");
  std::filesystem::remove(path);
}

TEST_CASE("scenarios") {
  AppConfig c = default_config();
  apply_scenario(c, "phi4-modekick-0.025");
  CHECK(c.sim.model == Model::phi4_perturbation);
  CHECK(c.sim.initial.kind == InitialKind::mode_kick);
  CHECK(c.sim.initial.amplitude == 0.025);
  CHECK(c.scenario == "phi4-modekick-0.025");

  apply_scenario(c, "phi4-gaussian-0.05");
  CHECK(c.sim.initial.kind == InitialKind::gaussian_odd);
  CHECK(c.sim.initial.amplitude == 0.05);

  apply_scenario(c, "sg-wobbler-0.9");
  CHECK(c.sim.model == Model::sine_gordon_full);
  CHECK(c.sim.initial.kind == InitialKind::wobbler_snapshot);
  CHECK(c.sim.initial.alpha == 0.9);
  CHECK_NOTHROW(c.sim.validate());

  CHECK_THROWS_AS(apply_scenario(c, "sg-wobbler-1.2"), ConfigError);
  CHECK_THROWS_AS(apply_scenario(c, "phi4-breather-0.1"), ConfigError);
  CHECK_THROWS_AS(apply_scenario(c, "nonsense"), ConfigError);
  CHECK_THROWS_AS(apply_scenario(c, "phi4-modekick-abc"), ConfigError);
}
