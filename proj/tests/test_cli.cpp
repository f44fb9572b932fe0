#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "coopfront/output.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* cli() { return std::getenv("COOPFRONT_CLI"); }

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / "coopfront_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int run(const std::string& args) {
  std::string cmd = std::string(cli()) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run(const std::string& sub, const fs::path& config, const fs::path& out, const std::string& extra = "") {
  return run(sub + " --config " + config.string() + " --out " + out.string() + " " + extra);
}

const char* kTwoSpecies = R"({
  "params": {"mu1": 1.5, "mu2": 1.0, "s10": 2, "s20": 2},
  "kernels": {"J1": {"family": "tent", "shape": 1}, "J2": {"family": "gaussian", "shape": 0.7}},
  "numerics": {"T": 6},
  "outputs": {"snapshot_times": [3, 6]}
})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("eig on a long interval approaches alpha" * doctest::skip(cli() == nullptr)) {
  fs::path dir = scratch("eig");
  put(dir / "c.json", R"({"params": {"d1": 1, "r1": 0.5, "a": 1},
    "kernels": {"J1": {"family": "laplace", "shape": 1}}, "eig": {"l": 200}})");
  REQUIRE(run("eig", dir / "c.json", dir / "out") == 0);
  json m = json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(std::abs(m["results"]["lambda"].get<double>() - 0.5) <= 0.02);
  REQUIRE(m["files"].size() == 1);
  const json& f = m["files"][0];
  CHECK(f["path"] == "eigenfunction.csv");
  std::string csv = slurp(dir / "out" / "eigenfunction.csv");
  CHECK(f["sha256"] == coop::sha256_hex(csv));
  CHECK(csv.rfind("x,phi\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(m["config_hash"] == coop::sha256_hex(slurp(dir / "c.json")));
  CHECK(m["effective_config"]["numerics"]["h"] == 0.05);
  CHECK(m["seedless"] == true);
}

TEST_CASE("invalid configs exit 2 and write nothing" * doctest::skip(cli() == nullptr)) {
  fs::path dir = scratch("invalid");
  const char* bad[] = {R"({"params": {"r1": -1}})", R"({"params": {"r1": 1,)", R"({"colour": 3})",
                       R"({"numerics": {"h": 0.5}, "params": {"s10": 0.6}})",
                       R"({"outputs": {"snapshot_times": [200]}})",
                       R"({"kernels": {"J1": {"family": "algebraic", "shape": 1}}})"};
  int i = 0;
  for (const char* text : bad) {
    fs::path c = dir / ("c" + std::to_string(i) + ".json"), out = dir / ("out" + std::to_string(i));
    put(c, text);
    CHECK(run("simulate", c, out) == 2);
    CHECK_FALSE(fs::exists(out));
    ++i;
  }
  CHECK(run("simulate", dir / "missing.json", dir / "m") == 2);
  CHECK(run("nosuchcommand --config x") == 2);
  // fat tail reaches the solver before it is rejected
  put(dir / "fat.json", R"({"kernels": {"J1": {"family": "algebraic", "shape": 2}}})");
  CHECK(run("semiwave", dir / "fat.json", dir / "fat") == 2);
  CHECK_FALSE(fs::exists(dir / "fat"));
}

TEST_CASE("undecided classification exits 4 and keeps the trajectory" * doctest::skip(cli() == nullptr)) {
  fs::path dir = scratch("undecided");
  put(dir / "c.json", R"({"params": {"r1": 0.3, "r2": 0.3, "mu1": 0.3, "mu2": 0.1, "s10": 1, "s20": 1},
    "kernels": {"J1": {"family": "tent", "shape": 2}, "J2": {"family": "tent", "shape": 2}},
    "numerics": {"T": 2}})");
  CHECK(run("classify", dir / "c.json", dir / "out") == 4);
  CHECK(fs::exists(dir / "out" / "trajectory.csv"));
  CHECK(run("simulate", dir / "c.json", dir / "sim") == 0);
}

TEST_CASE("identical configs give byte-identical artifacts" * doctest::skip(cli() == nullptr)) {
  fs::path dir = scratch("determinism");
  put(dir / "c.json", kTwoSpecies);
  REQUIRE(run("simulate", dir / "c.json", dir / "a", "--seedless") == 0);
  REQUIRE(run("simulate", dir / "c.json", dir / "b", "--seedless") == 0);
  std::string traj = slurp(dir / "a" / "trajectory.csv");
  CHECK(traj.rfind("t,s1,s2,s1_over_t,s2_over_t,sup_u,sup_v\n", 0) == 0);
  for (const char* f : {"trajectory.csv", "snapshot_000.csv", "snapshot_001.csv"})
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  CHECK(slurp(dir / "a" / "snapshot_000.csv").rfind("x,u,v\n", 0) == 0);
  json ma = json::parse(slurp(dir / "a" / "manifest.json"));
  json mb = json::parse(slurp(dir / "b" / "manifest.json"));
  CHECK(ma["files"] == mb["files"]);
  CHECK(ma["dt"].get<double>() > 0.0);
  CHECK(ma["neglected_tail_mass"]["J1"] == 0.0);
}

TEST_CASE("a sweep equals its standalone runs" * doctest::skip(cli() == nullptr)) {
  fs::path dir = scratch("sweep");
  json cfg = json::parse(kTwoSpecies);
  cfg["sweep"] = {{"parameter", "mu1"}, {"values", {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0}}};
  put(dir / "c.json", cfg.dump());
  REQUIRE(run("sweep", dir / "c.json", dir / "out", "--workers 3") == 0);
  std::string summary = slurp(dir / "out" / "summary.csv");
  std::size_t lines = 0;
  for (char ch : summary) lines += ch == '\n';
  CHECK(lines == 9);
  for (int i = 0; i < 8; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "point_%02d", i);
    fs::path point = dir / "out" / name;
    REQUIRE(fs::exists(point / "manifest.json"));
    json c = cfg;
    c.erase("sweep");
    c["params"]["mu1"] = cfg["sweep"]["values"][static_cast<std::size_t>(i)];
    fs::path alone_cfg = dir / (std::string(name) + ".json");
    put(alone_cfg, c.dump());
    fs::path alone = dir / (std::string(name) + "_alone");
    REQUIRE(run("simulate", alone_cfg, alone) == 0);
    for (const char* f : {"trajectory.csv", "snapshot_000.csv", "snapshot_001.csv"})
      CHECK(slurp(point / f) == slurp(alone / f));
  }
}

}  // TEST_SUITE
