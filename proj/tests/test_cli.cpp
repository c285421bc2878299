#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "bobylev/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {
const std::string exe = BOBYLEV_CLI_PATH;

int run(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd =
      env_prefix + exe + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

fs::path scratch() {
  const fs::path dir = fs::current_path() / "cli_scratch";
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const std::string& name, const json& cfg) {
  const fs::path p = scratch() / name;
  std::ofstream f(p);
  f << cfg.dump(2);
  return p;
}

json small_grid() {
  return json{{"r_min", 1e-3}, {"r_max", 10.0}, {"n_log", 48}, {"n_linear", 8}};
}
}  // namespace

TEST_CASE("argument errors exit with code 2") {
  CHECK(run("") == 2);                    // a subcommand is required
  CHECK(run("constants") == 2);           // --config is required
  CHECK(run("constants --bogus x") == 2);
  CHECK(run("--help") == 0);

  const fs::path broken = scratch() / "broken.json";
  std::ofstream(broken) << "{ not json";
  CHECK(run("constants --config " + broken.string() + " --out " +
            (scratch() / "b0").string()) == 2);

  const fs::path bad = write_config(
      "bad_scheme.json",
      json{{"kernel", {{"family", "constant"}, {"kappa_or_c", 1.0}}},
           {"scheme", "trapezoid"},
           {"initial", {{"preset", "w_p"}, {"p", 1.0}}}});
  CHECK(run("evolve --config " + bad.string() + " --out " +
            (scratch() / "b1").string()) == 2);
}

TEST_CASE("constants subcommand writes the moment table") {
  const fs::path cfg = write_config(
      "constants.json",
      json{{"kernel", {{"family", "constant"}, {"kappa_or_c", 1.0}}},
           {"alphas", {0.5, 1.0, 2.0}}});
  const fs::path out = scratch() / "constants_out";
  CHECK(run("constants --config " + cfg.string() + " --out " + out.string()) ==
        0);
  CHECK(fs::exists(out / "constants.csv"));
  CHECK(fs::exists(out / "constants.csv.json"));

  // The sidecar must carry the producing config verbatim.
  std::ifstream side(out / "constants.csv.json");
  const json meta = json::parse(side);
  CHECK(meta.contains("config"));
  CHECK(meta["config"]["alphas"].size() == 3);
  CHECK(meta["artifact"] == "constants.csv");
}

TEST_CASE("levy subcommand checks its own closed forms") {
  const fs::path cfg = write_config(
      "levy.json", json{{"p", 1.0}, {"t", 1.0}, {"n_points", 6}});
  const fs::path out = scratch() / "levy_out";
  CHECK(run("levy --config " + cfg.string() + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "density.csv"));
}

TEST_CASE("collide distinguishes expected from unexpected divergence") {
  json cfg{{"kernel", {{"family", "maxwellian_singular"}, {"kappa_or_c", 1.0}}},
           {"phi", {{"preset", "w_p"}, {"p", 0.4}, {"t0", 1.0}}},
           {"grid", small_grid()},
           {"r_nodes", {1.0}}};
  const fs::path out = scratch() / "collide_out";
  const fs::path unexpected = write_config("collide_raw.json", cfg);
  CHECK(run("collide --config " + unexpected.string() + " --out " +
            out.string()) == 3);

  cfg["expect_divergence"] = true;
  const fs::path expected = write_config("collide_expected.json", cfg);
  CHECK(run("collide --config " + expected.string() + " --out " +
            out.string()) == 0);
  CHECK(fs::exists(out / "collide.csv"));
}

TEST_CASE("failed assertion exits with code 1") {
  // The fitted blow-up slope carries a per-mille finite-window bias, so an
  // absurdly tight tolerance must fail, and do so through the exit code.
  const fs::path cfg = write_config(
      "nonexist_strict.json",
      json{{"p", 1.0}, {"alpha", 1.5}, {"slope_rel_tol", 1e-12}});
  const fs::path out = scratch() / "nonexist_strict_out";
  CHECK(run("nonexist --config " + cfg.string() + " --out " + out.string()) ==
        1);

  const fs::path ok = write_config(
      "nonexist.json", json{{"p", 1.0}, {"alpha", 1.5}});
  CHECK(run("nonexist --config " + ok.string() + " --out " + out.string()) ==
        0);
  CHECK(fs::exists(out / "nonexist.csv"));
}

TEST_CASE("evolve writes trajectory artifacts and respects BOBYLEV_OUT") {
  const json cfg{
      {"kernel", {{"family", "constant"}, {"kappa_or_c", 1.0}}},
      {"grid", small_grid()},
      {"p", 1.0},
      {"delta_p", 1.0},
      {"alpha", 1.0},
      {"dt", 5e-3},
      {"t_final", 0.05},
      {"outputs", {0.025, 0.05}},
      {"random_pairs", 5},
      {"initial", {{"preset", "w_p"}, {"p", 1.0}, {"t0", 1.0}}}};
  const fs::path path = write_config("evolve.json", cfg);

  const fs::path out = scratch() / "evolve_out";
  CHECK(run("evolve --config " + path.string() + " --out " + out.string()) ==
        0);
  for (const char* name : {"trajectory.csv", "diagnostics.csv", "envelope.csv"})
    CHECK(fs::exists(out / name));

  // The environment variable is the only override for the output directory.
  const fs::path env_out = scratch() / "evolve_env_out";
  CHECK(run("evolve --config " + path.string(),
            "BOBYLEV_OUT=" + env_out.string() + " ") == 0);
  CHECK(fs::exists(env_out / "trajectory.csv"));
}

TEST_CASE("identical config and seed give identical artifacts") {
  const json cfg{
      {"kernel", {{"family", "constant"}, {"kappa_or_c", 1.0}}},
      {"grid", small_grid()},
      {"dt", 5e-3},
      {"t_final", 0.04},
      {"outputs", {0.02, 0.04}},
      {"random_pairs", 8},
      {"initial", {{"preset", "w_p"}, {"p", 1.0}, {"t0", 1.0}}}};
  const fs::path path = write_config("det.json", cfg);
  const fs::path a = scratch() / "det_a";
  const fs::path b = scratch() / "det_b";
  CHECK(run("evolve --seed 99 --config " + path.string() + " --out " +
            a.string()) == 0);
  CHECK(run("evolve --seed 99 --config " + path.string() + " --out " +
            b.string()) == 0);
  for (const auto& entry : fs::directory_iterator(a)) {
    const fs::path other = b / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(bobylev::fnv1a_file(entry.path()) == bobylev::fnv1a_file(other));
  }
}
