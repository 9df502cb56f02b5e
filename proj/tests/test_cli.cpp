// End-to-end checks of the command-line binary (path injected by CMake).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "helpers.hpp"

#include "greedy/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace greedy;

namespace {

struct CmdResult {
  int exit_code;
  std::string output;
};

CmdResult run(const std::string& args) {
  const std::string tmp = (std::filesystem::temp_directory_path() / "greedy_cli_out.txt").string();
  const std::string cmd = std::string(GREEDY_CLI_PATH) + " " + args + " > " + tmp + " 2>&1";
  const int rc = std::system(cmd.c_str());
  std::ifstream in(tmp);
  std::string out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return {WEXITSTATUS(rc), out};
}

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("constants subcommand on the canonical basis") {
  const auto r = run("constants --basis canonical:2:4 --seed 7");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("K") != std::string::npos);
  CHECK(r.output.find("Cg") != std::string::npos);
  // all estimates are 1 on this basis
  CHECK(r.output.find("0.999") == std::string::npos);
}

TEST_CASE("constants with a missing basis file exits 1") {
  const auto r = run("constants --basis-file /nonexistent/missing.json");
  CHECK(r.exit_code == 1);
}

TEST_CASE("constants with a forced tiny budget exits 2") {
  const auto r = run("constants --basis summing:6 --budget 10");
  CHECK(r.exit_code == 2);
}

TEST_CASE("tga subcommand prints the expected table") {
  const auto r = run("tga --basis canonical:2:4 --coeffs 4,3,2,1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("pi,1,2,3,4") != std::string::npos);
  // row m=2: threshold 3, set {1,2}, residual sqrt(5), sigma sqrt(5), rho sqrt(6)
  const auto row_at = r.output.find("\n2,3,1 2,");
  REQUIRE(row_at != std::string::npos);
  const std::string row = r.output.substr(row_at + 1, r.output.find('\n', row_at + 1) - row_at - 1);
  CHECK(row.find("2.2360679774997") != std::string::npos);
  CHECK(row.find("2.4494897427831") != std::string::npos);
}

TEST_CASE("tga rejects a dimension mismatch") {
  const auto r = run("tga --basis canonical:2:4 --coeffs 1,2");
  CHECK(r.exit_code == 1);
}

TEST_CASE("tga of the zero element has zero residuals") {
  const auto r = run("tga --basis canonical:2:3 --coeffs 0,0,0");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("3,0,1 2 3,0,0,0,0") != std::string::npos);
}

TEST_CASE("verify on one basis writes a report and csv") {
  const std::string path = tmp_path("verify_one.json");
  const auto r = run("verify --basis canonical:2:3 --seed 7 --format csv --out " + path);
  CHECK(r.exit_code == 0);
  const json rep = load_json_file(path);
  CHECK(rep.at("schemaVersion").get<int>() == kReportSchemaVersion);
  CHECK(rep.at("runs").size() == 1);
  CHECK(rep.at("runs")[0].at("passed").get<bool>());
  const std::string csv_path = tmp_path("verify_one.csv");
  std::ifstream csv(csv_path);
  CHECK(csv.good());
}

TEST_CASE("report-diff distinguishes seeds") {
  const std::string a = tmp_path("diff_a.json");
  const std::string b = tmp_path("diff_b.json");
  const std::string c = tmp_path("diff_c.json");
  CHECK(run("verify --basis canonical:2:3 --seed 7 --out " + a).exit_code == 0);
  CHECK(run("verify --basis canonical:2:3 --seed 7 --out " + b).exit_code == 0);
  CHECK(run("verify --basis canonical:2:3 --seed 8 --out " + c).exit_code == 0);
  CHECK(run("report-diff " + a + " " + b).exit_code == 0);
  CHECK(run("report-diff " + a + " " + c).exit_code == 3);
}

TEST_CASE("config file drives the run and flags override it") {
  const std::string cfg_path = tmp_path("cfg.json");
  {
    RunConfig cfg;
    cfg.basis_id = "canonical:1:3";
    cfg.seed = 5;
    cfg.corpus.seed = 5;
    cfg.corpus.grid.count = 50;
    std::ofstream out(cfg_path);
    out << run_config_to_json(cfg).dump(2);
  }
  const std::string path = tmp_path("cfg_report.json");
  const auto r = run("verify --config " + cfg_path + " --out " + path);
  CHECK(r.exit_code == 0);
  const json rep = load_json_file(path);
  CHECK(rep.at("config").at("basis").get<std::string>() == "canonical:1:3");
  CHECK(rep.at("config").at("seed").get<int>() == 5);
}

TEST_CASE("complex field run") {
  const auto r = run("constants --basis canonical:2:3 --field complex --net-order 4 --seed 7");
  CHECK(r.exit_code == 0);
}
