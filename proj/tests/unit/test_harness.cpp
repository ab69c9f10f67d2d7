#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sqg/error.hpp"
#include "sqg/experiment.hpp"
#include "sqg/scenario.hpp"

using namespace sqg;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"([scenario]
name = tiny
n = 16
kappa = 1
T = 0.1

[time]
dt = 1e-3

[forcing]
type = modes
modes = 0 1 0.1 0

[initial]
type = modes
modes = 1 0 1 0; 2 1 0 0.5

[output]
sample_interval = 0.01
snapshot_stride = 5

[checks]
list = energy_inequality, decay_l2
)";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("sqg_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("sha256 test vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("minimal scenario parses") {
  auto s = parse_scenario(kMinimal);
  CHECK(s.name == "tiny");
  CHECK(s.n == 16);
  CHECK(s.kappa == 1.0);
  CHECK(s.dt.dt == 1e-3);
  REQUIRE(s.forcing.modes.size() == 1);
  CHECK(s.forcing.modes[0].k2 == 1);
  REQUIRE(s.initial.modes.size() == 2);
  CHECK(s.initial.modes[1].sin_amp == 0.5);
  CHECK(s.checks == std::vector<std::string>{"energy_inequality", "decay_l2"});
  CHECK(s.hash() == sha256_hex(kMinimal));
  auto theta = s.initial_field();
  CHECK(theta.mode(1, 0).real() == doctest::Approx(0.5));
}

TEST_CASE("configuration errors name the field") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      parse_scenario(text);
      FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  expect_error(replace(kMinimal, "kappa = 1", "kapa = 1"), "kapa");
  expect_error(replace(kMinimal, "kappa = 1", "kappa = 0"), "checks.list");
  expect_error(replace(kMinimal, "n = 16", "n = 15"), "scenario.n");
  expect_error(replace(kMinimal, "dt = 1e-3", "dt = fast"), "time.dt");
  expect_error(replace(kMinimal, "[output]", "[outputs]"), "outputs");
  expect_error(replace(kMinimal, "decay_l2", "decay_l3"), "decay_l3");
  auto inviscid = replace(replace(kMinimal, "kappa = 1", "kappa = 0"), "energy_inequality, decay_l2", "conservation");
  CHECK_NOTHROW(parse_scenario(inviscid));
}

TEST_CASE("runs are reproducible byte for byte") {
  auto spec = parse_scenario(kMinimal);
  auto a = run_experiment(spec, RunOptions{scratch("a"), 1});
  auto b = run_experiment(spec, RunOptions{scratch("b"), 1});
  CHECK(a.exit_code == kExitPass);
  CHECK(a.status == "pass");
  for (const char* f : {"trajectory.csv", "reports.txt", "final.ckpt", "series/l2.csv"})
    CHECK_MESSAGE(slurp(a.directory / f) == slurp(b.directory / f), f);

  auto manifest = nlohmann::json::parse(slurp(a.directory / "manifest.json"));
  CHECK(manifest["spec_hash"] == sha256_hex(slurp(a.directory / "spec.cfg")));
  CHECK(manifest["exit_code"] == 0);
  CHECK(parse_scenario(slurp(a.directory / "spec.cfg")).hash() == a.spec_hash);

  auto traj = load_trajectory(a.directory);
  CHECK(traj.samples.size() == 11);
  CHECK(traj.kappa == 1.0);
  CHECK(traj.snapshots.size() == 3);
  auto l2 = read_series_csv(a.directory / "series" / "l2.csv");
  REQUIRE(l2.size() == traj.samples.size());
  CHECK(l2.back().second == traj.samples.back().l2);
}

TEST_CASE("output root resolution") {
  CHECK(resolve_output_root("/x/y") == fs::path("/x/y"));
  setenv("SQG_OUTPUT_ROOT", "/from/env", 1);
  CHECK(resolve_output_root("") == fs::path("/from/env"));
  unsetenv("SQG_OUTPUT_ROOT");
  CHECK(resolve_output_root("") == fs::path("."));
}

TEST_CASE("series csv round trip") {
  auto dir = scratch("csv");
  Series s{{0.0, 1.0 / 3.0}, {0.1, 2e-300}, {0.2, 12345.678901234567}};
  write_series_csv(dir / "s.csv", s);
  CHECK(read_series_csv(dir / "s.csv") == s);
}
