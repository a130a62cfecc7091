#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

// Drives the installed binary end to end; the engine itself is covered by
// the per-module suites.

namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

std::string cli_path() {
  if (const char* env = std::getenv("BNCTRL_CLI")) return env;
  return "./bnctrl";
}

std::string fixtures_dir() {
  if (const char* env = std::getenv("BNCTRL_FIXTURES")) return env;
  return "../tests/fixtures";
}

std::string example1() { return fixtures_dir() + "/example1.bn"; }

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string command = cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[4096];
  size_t got;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
    result.output.append(buffer, got);
  }
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path scratch_file(const std::string& name) {
  fs::path dir = fs::temp_directory_path() /
                 ("bnctrl_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

}  // namespace

TEST_CASE("attractors command lists the worked example") {
  RunResult r = run("attractors " + example1());
  REQUIRE(r.exit_code == 0);
  Json doc = Json::parse(r.output);
  CHECK(doc["network"] == "example1");
  REQUIRE(doc["attractors"].size() == 3);
  CHECK(doc["attractors"][0]["states"] == Json::array({"000"}));
  CHECK(doc["attractors"][1]["states"] == Json::array({"110"}));
  CHECK(doc["attractors"][2]["states"] == Json::array({"111"}));
  CHECK(doc["attractors"][2]["id"] == 3);
}

TEST_CASE("labels file names attractors and resolves selectors") {
  std::string labels = fixtures_dir() + "/example1.labels";
  RunResult r = run("attractors " + example1() + " --labels " + labels);
  REQUIRE(r.exit_code == 0);
  Json doc = Json::parse(r.output);
  CHECK(doc["attractors"][0]["name"] == "Off");
  CHECK(doc["attractors"][2]["name"] == "AllOn");

  RunResult basins = run("basins " + example1() + " --labels " + labels +
                         " --attractor Pair");
  REQUIRE(basins.exit_code == 0);
  CHECK(Json::parse(basins.output)["attractor"] == 2);
}

TEST_CASE("parse errors exit with the input-error code") {
  auto bad = scratch_file("bad.bn");
  write_file(bad, "a = b\n");
  RunResult r = run("attractors " + bad.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("undeclared variable") != std::string::npos);

  RunResult missing = run("attractors " + bad.string() + ".does_not_exist");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("state-space bound exits with the resource code") {
  auto wide = scratch_file("wide.bn");
  std::string text;
  for (int i = 0; i < 30; ++i) text += "n" + std::to_string(i) + " = 1\n";
  write_file(wide, text);
  CHECK(run("attractors " + wide.string()).exit_code == 3);

  auto small = scratch_file("small.bn");
  write_file(small, "a = b\nb = a\nc = a\n");
  CHECK(run("attractors " + small.string() + " --max-n 2").exit_code == 3);
  CHECK(run("attractors " + small.string() + " --max-n 3").exit_code == 0);
}

TEST_CASE("basins command emits sorted bit-strings") {
  RunResult r = run("basins " + example1() + " --attractor A2");
  REQUIRE(r.exit_code == 0);
  Json doc = Json::parse(r.output);
  CHECK(doc["weak"] == Json::array({"010", "100", "101", "110"}));
  CHECK(doc["strong"] == Json::array({"110"}));

  RunResult by_state = run("basins " + example1() + " --attractor 111");
  REQUIRE(by_state.exit_code == 0);
  CHECK(Json::parse(by_state.output)["weak"] ==
        Json::array({"011", "101", "111"}));

  CHECK(run("basins " + example1() + " --attractor A9").exit_code == 2);
}

TEST_CASE("control command returns minimal solutions") {
  RunResult temp = run("control " + example1() + " --source A1 --target A2 --mode OT");
  REQUIRE(temp.exit_code == 0);
  Json temp_doc = Json::parse(temp.output);
  REQUIRE(temp_doc["solutions"].size() == 2);
  CHECK(temp_doc["solutions"][0]["one"] == Json::array({"x1"}));
  CHECK(temp_doc["solutions"][1]["one"] == Json::array({"x2"}));
  CHECK(temp_doc["solutions"][0]["size"] == 1);

  RunResult inst = run("control " + example1() + " --source A1 --target A3 --mode OI");
  Json inst_doc = Json::parse(inst.output);
  REQUIRE(inst_doc["solutions"].size() == 1);
  CHECK(inst_doc["solutions"][0]["one"] == Json::array({"x1", "x2", "x3"}));

  RunResult capped = run("control " + example1() +
                         " --source A1 --target A3 --mode OT --max-perturbations 1");
  CHECK(Json::parse(capped.output)["solutions"].empty());

  RunResult forbidden = run("control " + example1() +
                            " --source A1 --target A2 --mode OT --forbid-node x1");
  Json forbidden_doc = Json::parse(forbidden.output);
  REQUIRE(forbidden_doc["solutions"].size() == 1);
  CHECK(forbidden_doc["solutions"][0]["one"] == Json::array({"x2"}));

  CHECK(run("control " + example1() + " --source A1 --target A2 --forbid-node zz")
            .exit_code == 2);
}

TEST_CASE("paths command reproduces the worked example") {
  RunResult temp = run("paths " + example1() + " --source A1 --target A3 --mode AST");
  REQUIRE(temp.exit_code == 0);
  Json temp_doc = Json::parse(temp.output);
  CHECK(temp_doc["k"] == 2);
  REQUIRE(temp_doc["paths"].size() == 2);
  for (const auto& p : temp_doc["paths"]) {
    CHECK(p["intermediates"] == Json::array({2, 3}));
    CHECK(p["total"] == 2);
    CHECK(p["controls"][1]["one"] == Json::array({"x3"}));
  }
  CHECK(temp_doc["paths"][0]["controls"][0]["one"] == Json::array({"x1"}));
  CHECK(temp_doc["paths"][1]["controls"][0]["one"] == Json::array({"x2"}));

  RunResult inst = run("paths " + example1() + " --source A1 --target A3 --mode ASI");
  Json inst_doc = Json::parse(inst.output);
  CHECK(inst_doc["k"] == 3);
  REQUIRE(inst_doc["paths"].size() == 1);
  CHECK(inst_doc["paths"][0]["controls"][0]["one"] == Json::array({"x1", "x2"}));
  CHECK(inst_doc["paths"][0]["total"] == 3);

  RunResult perm = run("paths " + example1() + " --source A1 --target A3 --mode ASP");
  CHECK(Json::parse(perm.output)["paths"].size() == 2);

  RunResult barred = run("paths " + example1() +
                         " --source A1 --target A3 --mode AST --forbid-intermediate A2");
  CHECK(Json::parse(barred.output)["paths"].empty());

  RunResult forbidden = run("paths " + example1() +
                            " --source A1 --target A3 --mode AST --forbid-node x1");
  CHECK(Json::parse(forbidden.output)["paths"].size() == 1);
}

TEST_CASE("verify accepts exactly what paths emits") {
  auto path_file = scratch_file("paths.json");
  RunResult paths = run("paths " + example1() + " --source A1 --target A3 --mode AST");
  REQUIRE(paths.exit_code == 0);
  write_file(path_file, paths.output);

  RunResult ok = run("verify " + example1() + " " + path_file.string());
  CHECK(ok.exit_code == 0);
  Json ok_doc = Json::parse(ok.output);
  CHECK(ok_doc["ok"] == true);
  CHECK(ok_doc["paths_checked"] == 2);

  // corrupt the first step: {x1,x2} -> {x1} no longer commits anywhere
  Json corrupted = Json::parse(paths.output);
  corrupted["mode"] = "ASI";
  for (auto& p : corrupted["paths"]) p["mode"] = "ASI";
  auto corrupted_file = scratch_file("corrupted.json");
  write_file(corrupted_file, corrupted.dump());
  RunResult failed = run("verify " + example1() + " " + corrupted_file.string());
  CHECK(failed.exit_code == 1);
  Json failed_doc = Json::parse(failed.output);
  CHECK(failed_doc["ok"] == false);
  CHECK(failed_doc["results"][0]["failing_step"] == 0);
  CHECK(failed_doc["results"][0]["witness"] == "100");

  // truncate a schedule: controls and intermediates disagree in length
  Json truncated = Json::parse(paths.output);
  truncated["paths"][0]["controls"].erase(1);
  auto truncated_file = scratch_file("truncated.json");
  write_file(truncated_file, truncated.dump());
  CHECK(run("verify " + example1() + " " + truncated_file.string()).exit_code == 2);

  auto garbage_file = scratch_file("garbage.json");
  write_file(garbage_file, "{ not json");
  CHECK(run("verify " + example1() + " " + garbage_file.string()).exit_code == 2);
}

TEST_CASE("bench reports the worked example row") {
  RunResult r = run("bench " + example1() + " --source A1 --target A3");
  REQUIRE(r.exit_code == 0);
  Json doc = Json::parse(r.output);
  REQUIRE(doc["rows"].size() == 1);
  const Json& row = doc["rows"][0];
  CHECK(row["network"] == "example1");
  CHECK(row["V"] == 3);
  CHECK(row["E"] == 4);
  CHECK(row["A"] == 3);
  CHECK(row["modes"]["ASI"]["min_perturbations"] == 3);
  CHECK(row["modes"]["ASI"]["paths"] == 1);
  CHECK(row["modes"]["AST"]["min_perturbations"] == 2);
  CHECK(row["modes"]["AST"]["paths"] == 2);
  CHECK(row["modes"]["ASP"]["min_perturbations"] == 2);
  CHECK(row["modes"]["ASP"]["paths"] == 2);

  RunResult table = run("bench " + example1() +
                        " --source A1 --target A3 --format table");
  REQUIRE(table.exit_code == 0);
  CHECK(table.output.find("#perturbations ASI AST ASP") != std::string::npos);
  CHECK(table.output.find("#paths ASI AST ASP") != std::string::npos);
  CHECK(table.output.find("time ASI AST ASP") != std::string::npos);

  // a broken model yields an error row but a clean exit
  auto bad = scratch_file("bench_bad.bn");
  write_file(bad, "a = zz\n");
  RunResult mixed = run("bench " + example1() + " " + bad.string() +
                        " --source A1 --target A3");
  REQUIRE(mixed.exit_code == 0);
  Json mixed_doc = Json::parse(mixed.output);
  REQUIRE(mixed_doc["rows"].size() == 2);
  CHECK(mixed_doc["rows"][1].contains("error"));

  // no models at all: an empty report, not an error
  RunResult none = run("bench");
  REQUIRE(none.exit_code == 0);
  CHECK(Json::parse(none.output)["rows"].empty());
}

TEST_CASE("table and json formats carry the same data") {
  RunResult json = run("attractors " + example1());
  RunResult table = run("attractors " + example1() + " --format table");
  REQUIRE(json.exit_code == 0);
  REQUIRE(table.exit_code == 0);
  Json doc = Json::parse(json.output);
  for (const auto& a : doc["attractors"]) {
    for (const auto& s : a["states"]) {
      CHECK(table.output.find(s.get<std::string>()) != std::string::npos);
    }
  }
}

TEST_CASE("repeated runs are byte-identical") {
  const std::string commands[] = {
      "attractors " + example1(),
      "basins " + example1() + " --attractor A1",
      "control " + example1() + " --source A1 --target A3 --mode OT",
      "paths " + example1() + " --source A1 --target A3 --mode ASP",
  };
  for (const std::string& command : commands) {
    RunResult first = run(command);
    RunResult second = run(command);
    REQUIRE(first.exit_code == 0);
    CHECK(first.output == second.output);
  }
}

TEST_CASE("gen emits a parseable model, reproducibly") {
  RunResult a = run("gen --nodes 6 --seed 11");
  RunResult b = run("gen --nodes 6 --seed 11");
  RunResult c = run("gen --nodes 6 --seed 12");
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output != c.output);

  auto generated = scratch_file("generated.bn");
  write_file(generated, a.output);
  CHECK(run("attractors " + generated.string()).exit_code == 0);
}
