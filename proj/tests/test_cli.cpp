#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "efdyn/cli.hpp"
#include "efdyn/errors.hpp"
#include "efdyn/report.hpp"

using namespace efdyn;
using Catch::Approx;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("efdyn_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kAnalyze = R"({
  "command": "analyze",
  "params": {"N": 6, "delta": 2, "mu": 2}
})";

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST_CASE("config parsing fills defaults and round trips") {
  const RunConfig c = parse_config(kAnalyze);
  CHECK(c.command == Command::Analyze);
  CHECK(c.params.N == 6);
  CHECK(c.params.p == 2);
  CHECK(c.params.eps1 == 1);
  const std::string text = serialize_config(c);
  const RunConfig d = parse_config(text);
  CHECK(d.params == c.params);
  CHECK(serialize_config(d) == text);

  const RunConfig e = parse_config(R"({"params": {"N": 5}})", Command::Sweep);
  CHECK(e.command == Command::Sweep);
}

TEST_CASE("config errors name the offending field") {
  CHECK(error_of(R"({"command": "analyze", "params": {"N": 6, "deltaa": 2}})") == "params.deltaa: unknown key");
  CHECK(error_of(R"({"command": "analyze", "bogus": 1, "params": {}})") == "bogus: unknown key");
  CHECK(error_of(R"({"command": "analyze"})") == "params: required for the analyze command");
  CHECK(error_of(R"({"command": "scalar"})") == "scalar: required for the scalar command");
  CHECK(error_of(R"({"command": "analyze", "params": {"N": "six"}})") == "params.N: expected a number");
  CHECK(error_of(R"({"command": "analyze", "params": {"eps1": 0}})") == "params.eps1: must be +1 or -1");
  CHECK(error_of(R"({"command": "fly", "params": {}})") == "command: unknown command 'fly'");
  CHECK(error_of(R"({"command": "sweep", "params": {}, "sweep": {"param": "zeta"}})") ==
        "sweep.param: unknown parameter 'zeta'");
  CHECK(error_of(R"({"command": "portrait", "params": {}, "portrait": {"plane": "XX"}})") ==
        "portrait.plane: expected two distinct letters from XYZW");
  CHECK(error_of("{").rfind("config: invalid JSON", 0) == 0);
}

TEST_CASE("analyze report is complete and reruns are byte-identical") {
  const RunConfig c = parse_config(kAnalyze);
  const fs::path a = scratch("analyze_a"), b = scratch("analyze_b");
  const auto ra = run(c, a.string());
  const auto rb = run(c, b.string());
  CHECK_FALSE(ra.numericFailure);
  REQUIRE(ra.files == rb.files);
  for (const auto& f : ra.files) {
    INFO(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const json r = json::parse(slurp(a / "report.json"));
  for (const char* k : {"validation", "derived", "catalog", "spectra", "localVerdicts", "oscillation", "region",
                        "existence", "asymptotics", "files"})
    CHECK(r.contains(k));
  CHECK(r["existence"]["verdict"] == "GS-exists");
  CHECK(r["existence"]["source"] == "hamiltonian-critical-hyperbola");
  CHECK(parse_config(slurp(a / "config.json")).params == c.params);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("model errors are reported per section") {
  const RunConfig c = parse_config(R"({"command": "analyze", "params": {"N": 4, "delta": 0.5, "mu": 2}})");
  const fs::path d = scratch("analyze_zero_d");
  const auto out = run(c, d.string());
  CHECK_FALSE(out.numericFailure);
  const json r = json::parse(slurp(d / "report.json"));
  REQUIRE(r["derived"].contains("error"));
  CHECK(r["derived"]["error"]["kind"] == "ZeroDiscriminant");
  fs::remove_all(d);
}

TEST_CASE("scalar portrait finds the equilibria on the grid") {
  const RunConfig c = parse_config(R"({"command": "portrait", "scalar": {"N": 3, "Q": 5},
    "portrait": {"range": [0, 2, 0, 4], "n": 41, "trajectories": 2}})");
  const fs::path d = scratch("portrait");
  run(c, d.string());
  const json r = json::parse(slurp(d / "report.json"));
  const auto zeros = r["portrait"]["zeros"];
  std::vector<std::pair<double, double>> z;
  for (const auto& p : zeros) z.emplace_back(p[0].get<double>(), p[1].get<double>());
  std::sort(z.begin(), z.end());
  REQUIRE(z.size() == 4);
  CHECK(z[0] == std::pair{0.0, 0.0});
  CHECK(z[1] == std::pair{0.0, 3.0});
  CHECK(z[2] == std::pair{0.5, 0.5});
  CHECK(z[3] == std::pair{1.0, 0.0});
  fs::remove_all(d);
}

TEST_CASE("parameter sweep locates the flip on the critical hyperbola") {
  const RunConfig c = parse_config(R"({"command": "sweep", "params": {"N": 6, "delta": 2, "mu": 2},
    "sweep": {"kind": "parameter", "param": "delta", "from": 1.8, "to": 2.2, "step": 0.1, "tied": {"mu": 0}}})");
  const fs::path d = scratch("sweep");
  run(c, d.string());
  const json r = json::parse(slurp(d / "report.json"));
  REQUIRE(r.contains("flipAt"));
  CHECK(r["flipAt"].get<double>() == Approx(2.0));
  const std::string csv = slurp(d / "sweep.csv");
  CHECK(csv.rfind("delta,mu,found,dirichlet,predicted,error\n", 0) == 0);
  fs::remove_all(d);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "bad.json") << R"({"params": {"N": 6, "deltaa": 2}})";
    std::ofstream(dir / "good.json") << kAnalyze;
  }
  auto call = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli_main(static_cast<int>(argv.size()), argv.data());
  };
  CHECK(call({"efdyn", "analyze", "--config", (dir / "bad.json").string()}) == 2);
  CHECK(call({"efdyn", "analyze", "--config", (dir / "missing.json").string()}) == 2);
  CHECK(call({"efdyn", "analyze"}) == 2);
  CHECK(call({"efdyn", "analyze", "--config", (dir / "good.json").string(), "--out", (dir / "o").string()}) == 0);
  CHECK(fs::exists(dir / "o" / "report.json"));
  fs::remove_all(dir);
}
