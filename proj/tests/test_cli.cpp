#include <doctest.h>

#include "config.hpp"
#include "experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qig::cli;

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string &tag) {
    path = std::filesystem::temp_directory_path() / ("qig_test_" + tag);
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream fs(line);
    std::string field;
    while (std::getline(fs, field, ',')) fields.push_back(field);
    rows.push_back(fields);
  }
  return rows;
}

} // namespace

TEST_CASE("config parsing") {
  const std::string text = "[experiment]\nname = coin_info\n"
                           "[grid]\npoints = 11\nlambda_min = 0.1\nphis = pi/4, pi/2\n";
  Config cfg = Config::parse_string(text);
  CHECK(cfg.get_string("experiment", "name") == "coin_info");
  CHECK(cfg.get_long("grid", "points") == 11);
  CHECK(cfg.get_double("grid", "lambda_min") == doctest::Approx(0.1));
  const auto phis = cfg.get_double_list("grid", "phis");
  REQUIRE(phis.size() == 2);
  CHECK(phis[0] == doctest::Approx(M_PI / 4));
  CHECK(phis[1] == doctest::Approx(M_PI / 2));
  CHECK_NOTHROW(cfg.reject_unknown_keys());

  SUBCASE("round trip is the identity") {
    const std::string serialized = Config::parse_string(text).serialize();
    CHECK(Config::parse_string(serialized).serialize() == serialized);
  }

  SUBCASE("unknown keys reject the run") {
    Config incomplete = Config::parse_string(text + "typo_key = 3\n");
    incomplete.get_string("experiment", "name");
    CHECK_THROWS_AS(incomplete.reject_unknown_keys(), ConfigError);
  }

  SUBCASE("malformed inputs") {
    CHECK_THROWS_AS(Config::parse_string("key = 1\n"), ConfigError);           // no section
    CHECK_THROWS_AS(Config::parse_string("[a]\nk = 1\nk = 2\n"), ConfigError); // duplicate
    CHECK_THROWS_AS(Config::parse_string("[a\nk = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_number("2x"), ConfigError);
    CHECK(parse_number("2pi") == doctest::Approx(2 * M_PI));
    CHECK(parse_number("-pi/8") == doctest::Approx(-M_PI / 8));
  }
}

TEST_CASE("coin experiment output") {
  TempDir dir("coin");
  Config cfg = Config::parse_string("[experiment]\nname = coin_info\n[grid]\npoints = 99\n");
  RunOptions opt;
  opt.out_dir = dir.path.string();
  const RunManifest manifest = run_experiment("coin_info", cfg, opt);
  REQUIRE(manifest.outputs.size() == 1);
  CHECK(manifest.outputs[0].file == "coin_info.csv");

  const auto rows = parse_csv(read_file(dir.path / "coin_info.csv"));
  REQUIRE(rows.size() == 100);
  CHECK(rows[0] == std::vector<std::string>{"lambda", "shannon_bits", "fisher"});

  double shannon_01 = 0.0, shannon_09 = 0.0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double lambda = std::stod(rows[r][0]);
    const double shannon = std::stod(rows[r][1]);
    const double fisher = std::stod(rows[r][2]);
    if (std::abs(lambda - 0.5) < 1e-9) {
      CHECK(shannon == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(fisher == doctest::Approx(1.0).epsilon(1e-10));
    }
    if (std::abs(lambda - 0.1) < 1e-6) {
      shannon_01 = shannon;
      CHECK(fisher == doctest::Approx(1.0 / 0.36).epsilon(1e-6));
    }
    if (std::abs(lambda - 0.9) < 1e-6) shannon_09 = shannon;
    CHECK(fisher == doctest::Approx(1.0 / (4.0 * lambda * (1.0 - lambda))).epsilon(1e-8));
  }
  CHECK(shannon_01 == doctest::Approx(shannon_09).epsilon(1e-9));

  SUBCASE("grid touching the boundary is a config error") {
    Config bad = Config::parse_string(
        "[experiment]\nname = coin_info\n[grid]\nlambda_min = 0\npoints = 9\n");
    CHECK_THROWS_AS(run_experiment("coin_info", bad, opt), ConfigError);
  }
}

TEST_CASE("qubit experiment verifies its own closed forms") {
  TempDir dir("qubit");
  Config cfg = Config::parse_string("[experiment]\nname = qubit_info\n");
  RunOptions opt;
  opt.out_dir = dir.path.string();
  run_experiment("qubit_info", cfg, opt);
  const auto rows = parse_csv(read_file(dir.path / "qubit_info.csv"));
  REQUIRE(rows.size() == 13); // header + 6 betas x 2 phis
  // variance = 1 at phi = pi/2 for every beta
  for (std::size_t r = 1; r < rows.size(); ++r)
    if (std::abs(std::stod(rows[r][1]) - M_PI / 2) < 1e-12)
      CHECK(std::stod(rows[r][2]) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("two-spin experiment") {
  TempDir dir("twospin");
  Config cfg = Config::parse_string(
      "[experiment]\nname = two_spin\n[grid]\nalpha_points = 9\n");
  RunOptions opt;
  opt.out_dir = dir.path.string();
  run_experiment("two_spin", cfg, opt);
  const auto rows = parse_csv(read_file(dir.path / "two_spin.csv"));
  REQUIRE(rows.size() == 1 + 9 * 2 * 2 * 3);

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double alpha = std::stod(rows[r][0]);
    const std::string &state = rows[r][1];
    const std::string &generator = rows[r][2];
    const double density = std::stod(rows[r][4]);
    const double mean_density = std::stod(rows[r][5]);
    if (state == "phi") {
      CHECK(density <= std::stod(rows[r][6]) + 1e-12); // never exceeds the bound
      CHECK(mean_density <= 1.0 + 1e-12);
    }
    if (state == "psi" && generator == "-" && std::abs(alpha - M_PI / 4) < 1e-9)
      CHECK(density == doctest::Approx(2.0).epsilon(1e-10));
    if (state == "psi" && generator == "+" && std::abs(alpha - M_PI / 4) < 1e-9)
      CHECK(density == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("tfim experiment with fit block") {
  TempDir dir("tfim");
  Config cfg = Config::parse_string("[experiment]\nname = tfim_scaling\n"
                                    "[grid]\nsizes = 4, 5, 6, 8\ng = 1, 2\n");
  RunOptions opt;
  opt.out_dir = dir.path.string();
  opt.threads = 2;
  run_experiment("tfim_scaling", cfg, opt);
  const auto rows = parse_csv(read_file(dir.path / "tfim_scaling.csv"));
  REQUIRE(rows.size() == 9);
  CHECK(rows[0] ==
        std::vector<std::string>{"L", "g", "fs_density", "energy_susceptibility"});
  // fs density grows with L at criticality, saturates off-critical
  CHECK(std::stod(rows[4][2]) > std::stod(rows[1][2]));
  const std::string fit = read_file(dir.path / "tfim_scaling_fit.json");
  CHECK(fit.find("fs_density_exponent") != std::string::npos);
}

TEST_CASE("deterministic reruns produce identical digests") {
  TempDir dir_a("det_a"), dir_b("det_b");
  RunOptions opt_a, opt_b;
  opt_a.out_dir = dir_a.path.string();
  opt_b.out_dir = dir_b.path.string();
  const std::string text =
      "[experiment]\nname = two_spin\n[grid]\nalpha_points = 13\n";
  Config cfg_a = Config::parse_string(text);
  Config cfg_b = Config::parse_string(text);
  const RunManifest a = run_experiment("two_spin", cfg_a, opt_a);
  const RunManifest b = run_experiment("two_spin", cfg_b, opt_b);
  REQUIRE(a.outputs.size() == b.outputs.size());
  for (std::size_t i = 0; i < a.outputs.size(); ++i) {
    CHECK(a.outputs[i].file == b.outputs[i].file);
    CHECK(a.outputs[i].sha256 == b.outputs[i].sha256);
  }
}

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("unknown experiment and mismatched names are config errors") {
  TempDir dir("bad");
  RunOptions opt;
  opt.out_dir = dir.path.string();
  Config cfg = Config::parse_string("[experiment]\nname = coin_info\n");
  CHECK_THROWS_AS(run_experiment("not_an_experiment", cfg, opt), ConfigError);
  Config mismatched = Config::parse_string("[experiment]\nname = two_spin\n");
  CHECK_THROWS_AS(run_experiment("coin_info", mismatched, opt), ConfigError);
}
