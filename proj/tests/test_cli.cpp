#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"

using namespace qw;
using namespace qw::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "qwells");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("spectrum command") {
  const Outcome o = invoke({"spectrum", "--topology", "periodic-triple"});
  REQUIRE(o.code == kExitOk);
  const Json j = Json::parse(o.out);
  CHECK(j["config"]["command"] == "spectrum");
  const auto& e = j["result"]["spectrum"]["eigenvalues"];
  CHECK(e[0].get<double>() == doctest::Approx(-2.0));
  CHECK(e[2].get<double>() == doctest::Approx(1.0));
  CHECK(j["result"]["pass"] == true);
}

TEST_CASE("explicit flags override the config file") {
  const auto cfg = temp_file("qwells_cli_cfg.json", R"({"topology": "cyclic", "d": 5, "nu": 2.0})");
  const Outcome o = invoke({"spectrum", "--config", cfg.string(), "--d", "6"});
  REQUIRE(o.code == kExitOk);
  const Json j = Json::parse(o.out);
  CHECK(j["config"]["params"]["d"] == 6);
  CHECK(j["config"]["params"]["nu"] == 2.0);
  CHECK(j["result"]["spectrum"]["eigenvalues"].size() == 6);
  CHECK(j["result"]["spectrum"]["eigenvalues"][0].get<double>() == doctest::Approx(-4.0));

  const Outcome again = invoke({"spectrum", "--config", cfg.string(), "--d", "6"});
  CHECK(again.out == o.out);
  std::filesystem::remove(cfg);
}

TEST_CASE("run config round trip") {
  RunConfig c;
  c.command = "synth";
  c.params = {{"target", "hadamard"}, {"method", "two-step"}};
  c.seed = 42;
  const RunConfig back = RunConfig::from_json(Json::parse(c.to_json().dump()));
  CHECK(back.command == c.command);
  CHECK(back.params == c.params);
  CHECK(back.seed == 42);
  CHECK(execute(back).artifact == execute(c).artifact);
}

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({}).code == kExitUsage);
  CHECK(invoke({"spectrum", "--bogus"}).code == kExitUsage);
  CHECK(invoke({"spectrum", "--topology", "ring"}).code == kExitUsage);
  CHECK(invoke({"evolve", "--topology", "symmetric-double", "--steps", "0"}).code == kExitUsage);
  const auto bad = temp_file("qwells_cli_bad.json", "{ not json");
  CHECK(invoke({"spectrum", "--config", bad.string()}).code == kExitUsage);
  std::filesystem::remove(bad);
  CHECK(invoke({"spectrum", "--config", "/nonexistent/cfg.json"}).code == kExitUsage);
  CHECK(invoke({"synth", "--target", "hadamard", "--method", "warp"}).code == kExitUsage);
  CHECK(invoke({"spectrum", "--topology", "cyclic", "--d", "4", "--format", "csv"}).code == kExitUsage);
}

TEST_CASE("synth command") {
  const Outcome h = invoke({"synth", "--target", "hadamard", "--method", "two-step", "--schedule"});
  REQUIRE(h.code == kExitOk);
  const Json j = Json::parse(h.out);
  CHECK(j["result"]["report"]["phase_distance"].get<double>() < 1e-12);
  CHECK(j["result"]["schedule"]["events"].size() > 0);

  const Outcome x = invoke({"synth", "--target", "x01", "--method", "commuting", "--eps", "0.05"});
  REQUIRE(x.code == kExitOk);
  CHECK(Json::parse(x.out)["result"]["report"]["phase_distance"].get<double>() < 1e-11);

  const Outcome q = invoke({"synth", "--target", "qft3", "--method", "su3"});
  REQUIRE(q.code == kExitOk);
  CHECK(Json::parse(q.out)["result"]["pass"] == true);
}

TEST_CASE("evolve writes csv") {
  const Outcome o = invoke({"evolve", "--topology", "symmetric-double", "--t-max", "3.14159", "--steps", "4"});
  REQUIRE(o.code == kExitOk);
  CHECK(o.out.rfind("# config: ", 0) == 0);
  int lines = 0;
  std::istringstream in(o.out);
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 7);
}

TEST_CASE("oracle strict mode") {
  const Outcome ok = invoke({"oracle", "--potential", "double", "--n-points", "1024"});
  REQUIRE(ok.code == kExitOk);
  CHECK(Json::parse(ok.out)["result"]["pass"] == true);
  const Outcome shallow = invoke({"oracle", "--potential", "double", "--v0", "5", "--a", "0.05", "--n-points", "512", "--strict"});
  CHECK(shallow.code == kExitValidation);
  CHECK(shallow.err.find("validation failed") != std::string::npos);
}

TEST_CASE("output files and validate command") {
  const auto path = std::filesystem::temp_directory_path() / "qwells_cli_validate.json";
  const Outcome o = invoke({"validate", "--seed", "7", "--samples", "50", "-o", path.string()});
  CHECK(o.code == kExitOk);
  CHECK(o.out.empty());
  std::ifstream f(path);
  const Json j = Json::parse(f);
  CHECK(j["result"]["pass"] == true);
  CHECK(j["config"]["seed"] == 7);
  std::filesystem::remove(path);
}

TEST_CASE("pulse plan") {
  const Outcome o = invoke({"pulse-plan", "--kind", "resonant_z", "--omega", "6.283185307179586", "--n-pulses", "3"});
  REQUIRE(o.code == kExitOk);
  const Json j = Json::parse(o.out);
  CHECK(j["result"]["schedule"]["events"].size() == 3);
  CHECK(invoke({"pulse-plan", "--kind", "resonant_z", "--omega", "-1", "--n-pulses", "3"}).code == kExitUsage);
}

}  // TEST_SUITE
