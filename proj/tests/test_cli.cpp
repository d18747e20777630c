#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "stripspec/config.hpp"
#include "stripspec/runner.hpp"

using namespace stripspec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("stripspec_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string write_config(const TempDir& dir, const char* name, const std::string& body) {
  const fs::path p = dir.path / name;
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST_CASE("config: profile parsing and schema rejection") {
  CHECK(profile_from_json_text(R"({"kind":"hat","eps":0.5})").eps() == 0.5);
  CHECK(profile_from_json_text(R"({"kind":"constant","c":0.3})").kind() ==
        ProfileKind::Constant);
  CHECK(profile_from_json_text(R"({"kind":"pwl","points":[[0,0],[0.5,0.2],[1,0]]})")
            .base_points()
            .size() == 3);
  CHECK_THROWS_AS(profile_from_json_text(R"({"kind":"hat","bogus":1})"), ConfigError);
  CHECK_THROWS_AS(profile_from_json_text(R"({"kind":"wedge"})"), ConfigError);
  CHECK_THROWS_AS(profile_from_json_text(R"({"kind":"constant"})"), ConfigError);
}

TEST_CASE("config: unknown keys rejected, command keys enforced") {
  TempDir dir;
  const auto good = write_config(dir, "good.json", R"({
    "profile": {"kind": "constant", "c": 0.0},
    "N_list": [2],
    "m_count": 1,
    "resolution": {"J": 4, "levels": 1},
    "output_dir": ")" + (dir.path / "out").string() + R"("
  })");
  CHECK(load_config(good, "eigs").N_list.size() == 1);
  CHECK_THROWS_AS(load_config(good, "phase"), ConfigError);  // N_list not a phase key

  const auto bad = write_config(dir, "bad.json", R"({
    "profile": {"kind": "hat"}, "N_list": [2], "turbo": true
  })");
  CHECK_THROWS_AS(load_config(bad, "eigs"), ConfigError);
  CHECK_THROWS_AS(load_config((dir.path / "missing.json").string(), "eigs"), ConfigError);
}

TEST_CASE("cmd_eigs emits one row per (m, level) and reruns byte-identically") {
  TempDir dir;
  RunConfig cfg;
  cfg.command = "eigs";
  cfg.profile = Profile::constant(0.0);
  cfg.N_list = {2.0};
  cfg.m_count = 2;
  cfg.J = 8;
  cfg.levels = 3;
  cfg.output_dir = (dir.path / "out").string();
  cfg.jobs = 1;

  OutputMap out1, out2;
  CHECK(run_command(cfg, &out1) == kExitOk);
  CHECK(run_command(cfg, &out2) == kExitOk);
  REQUIRE(out1.count("eigs.csv"));
  CHECK(out1.at("eigs.csv") == out2.at("eigs.csv"));
  // header + m_count * levels rows
  const std::string& csv = out1.at("eigs.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3);
  CHECK(fs::exists(fs::path(cfg.output_dir) / "eigs.csv"));
}

TEST_CASE("cmd_phase writes the extraction summary") {
  TempDir dir;
  RunConfig cfg;
  cfg.command = "phase";
  cfg.profile = Profile::constant(0.3);
  cfg.L = 8.0;
  cfg.J = 16;
  cfg.levels = 1;
  cfg.K = 6;
  cfg.output_dir = (dir.path / "out").string();
  cfg.jobs = 1;

  OutputMap out;
  CHECK(run_command(cfg, &out) == kExitOk);
  REQUIRE(out.count("phase.json"));
  CHECK(out.at("phase.json").find("\"a_fit\"") != std::string::npos);
  CHECK(out.at("phase.json").find("\"mode_rates\"") != std::string::npos);
  REQUIRE(out.count("field.csv"));
  CHECK(out.at("field.csv").rfind("x,y,U", 0) == 0);
}

TEST_CASE("cmd_features without m=2 field errors out") {
  TempDir dir;
  RunConfig cfg;
  cfg.command = "features";
  cfg.profile = Profile::constant(0.0);
  cfg.N_list = {2.0};  // 3 log 2 covers the whole strip: composite gap n/a,
  cfg.J = 8;           // but features only need the fields; keep N small
  cfg.levels = 3;
  cfg.m_count = 2;
  cfg.output_dir = (dir.path / "out").string();
  cfg.jobs = 1;
  OutputMap out;
  CHECK(run_command(cfg, &out) == kExitOk);
  REQUIRE(out.count("features.json"));
  CHECK(out.at("features.json").find("\"nodal\"") != std::string::npos);
}

TEST_CASE("cmd_mesh_dump") {
  TempDir dir;
  RunConfig cfg;
  cfg.command = "mesh-dump";
  cfg.profile = Profile::hat(1.0);
  cfg.L = 4.0;
  cfg.J = 8;
  cfg.output_dir = (dir.path / "out").string();
  OutputMap out;
  CHECK(run_command(cfg, &out) == kExitOk);
  REQUIRE(out.count("mesh.msh"));
  int nn = 0, nt = 0;
  std::sscanf(out.at("mesh.msh").c_str(), "%d %d", &nn, &nt);
  CHECK(nn > 0);
  CHECK(nt > 0);
}

TEST_CASE("STRIP_SPECTRA_JOBS env overrides the config") {
  ::setenv("STRIP_SPECTRA_JOBS", "3", 1);
  CHECK(effective_jobs(7) == 3);
  ::unsetenv("STRIP_SPECTRA_JOBS");
  CHECK(effective_jobs(7) == 7);
}
