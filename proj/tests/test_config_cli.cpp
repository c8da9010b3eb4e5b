#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pfluid/cli.hpp"
#include "pfluid/config.hpp"

using namespace pfluid;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pfluid-lab");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pfluid-cli-test-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> data_lines(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST_CASE("config round trip") {
  ExperimentConfig c;
  c.p = 1.7;
  c.delta = 0.05;
  c.nmesh = {8, 16, 32};
  c.c3 = 2.0;
  c.T = 0.25;
  c.solution = "beltrami-3d";
  c.dim = 3;
  c.seed = 99;
  c.out = "somewhere";
  c.validate();
  CHECK(config_from_json(to_json(c)) == c);
  CHECK(config_from_json(nlohmann::json::parse(to_json(c).dump())) == c);
}

TEST_CASE("config validation names the field") {
  const nlohmann::json base = {{"p", 1.8}, {"delta", 0.0}, {"nmesh", {8}}, {"T", 0.5}, {"solution", "zero"}};
  auto message = [](const nlohmann::json& j) -> std::string {
    try {
      config_from_json(j).validate();
    } catch (const std::invalid_argument& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message(base).empty());
  nlohmann::json j = base;
  j.erase("T");
  CHECK(message(j).find("'T'") != std::string::npos);
  j = base;
  j["p"] = 1.4;
  CHECK(message(j).find("'p'") != std::string::npos);
  j = base;
  j["delta"] = 2.0;
  CHECK(message(j).find("'delta'") != std::string::npos);
  j = base;
  j["nmesh"] = "eight";
  CHECK(message(j).find("'nmesh'") != std::string::npos);
  j = base;
  j["solution"] = "beltrami-3d";
  j["dim"] = 2;
  CHECK(message(j).find("'dim'") != std::string::npos);
  j = base;
  j["solution"] = "poiseuille";
  CHECK(message(j).find("'solution'") != std::string::npos);
}

TEST_CASE("cli exit codes for invalid input") {
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({}).code == kExitValidation);
  CHECK(cli({"run", "--bogus"}).code == kExitValidation);

  const CliResult missing = cli({"run", "--delta", "0", "--nmesh", "8", "--T", "0.5", "--solution", "zero"});
  CHECK(missing.code == kExitValidation);
  CHECK(missing.err.find("'p'") != std::string::npos);

  const CliResult low_p = cli({"convergence", "--p", "1.4", "--delta", "0", "--nmesh", "8,16", "--T", "0.5",
                               "--solution", "taylor-green-2d", "--out", scratch("lowp").string()});
  CHECK(low_p.code == kExitValidation);
  CHECK(low_p.err.find("'p'") != std::string::npos);

  const CliResult single = cli({"convergence", "--p", "2", "--delta", "0", "--nmesh", "8", "--T", "0.5",
                                "--solution", "taylor-green-2d", "--out", scratch("single").string()});
  CHECK(single.code == kExitValidation);
  CHECK(single.err.find("'nmesh'") != std::string::npos);

  CHECK(cli({"props", "--count", "0"}).code == kExitValidation);
  CHECK(cli({"gronwall", (scratch("none") / "missing.csv").string()}).code == kExitValidation);
}

TEST_CASE("zero solution gives all-zero outputs") {
  const fs::path dir = scratch("zero");
  const CliResult r = cli({"run", "--p", "1.7", "--delta", "0", "--nmesh", "4", "--T", "0.3", "--steps", "3",
                           "--solution", "zero", "--out", dir.string()});
  REQUIRE(r.code == kExitOk);
  const std::vector<std::string> state = data_lines(dir / "state.csv");
  REQUIRE(state.size() > 1);
  for (std::size_t i = 1; i < state.size(); ++i) {
    const std::string value = state[i].substr(state[i].rfind(',') + 1);
    CHECK(std::stod(value) == 0.0);
  }
  for (const std::string& row : data_lines(dir / "errors.csv")) {
    if (row.rfind("m,", 0) == 0) continue;
    std::istringstream ss(row);
    std::string m, t, a, b, nd;
    std::getline(ss, m, ',');
    std::getline(ss, t, ',');
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, nd, ',');
    CHECK(std::stod(a) == 0.0);
    CHECK(std::stod(b) == 0.0);
    CHECK(std::stod(nd) == 0.0);
  }
}

TEST_CASE("taylor-green run writes one row per step and is reproducible") {
  const fs::path a = scratch("tg-a"), b = scratch("tg-b");
  const std::vector<std::string> args = {"run", "--p", "2", "--delta", "0", "--nmesh", "8",
                                         "--T", "0.5", "--steps", "4", "--solution", "taylor-green-2d"};
  std::vector<std::string> args_a = args, args_b = args;
  args_a.insert(args_a.end(), {"--out", a.string()});
  args_b.insert(args_b.end(), {"--out", b.string()});
  REQUIRE(cli(args_a).code == kExitOk);
  REQUIRE(cli(args_b).code == kExitOk);

  const std::vector<std::string> steps = data_lines(a / "steps.csv");
  REQUIRE(steps.size() == 5);
  CHECK(steps[0].rfind("m,t,newton_iters,residual", 0) == 0);
  for (std::size_t i = 1; i < steps.size(); ++i) {
    CHECK(steps[i].find("nan") == std::string::npos);
    CHECK(steps[i].find("inf") == std::string::npos);
    CHECK(steps[i].back() == '1');
  }
  CHECK(slurp(a / "steps.csv") == slurp(b / "steps.csv"));
  CHECK(slurp(a / "state.csv") == slurp(b / "state.csv"));
  CHECK(slurp(a / "errors.csv") == slurp(b / "errors.csv"));
}

TEST_CASE("config file with flag overrides") {
  const fs::path dir = scratch("file");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "config.json");
    f << R"({"p": 1.5, "delta": 0.0, "nmesh": [4], "T": 0.2, "solution": "zero"})";
  }
  const std::string file = (dir / "config.json").string();
  CHECK(cli({"run", "--config", file, "--out", (dir / "o").string()}).code == kExitValidation);
  const CliResult ok = cli({"run", "--config", file, "--p", "1.9", "--steps", "1", "--out", (dir / "o").string()});
  CHECK(ok.code == kExitOk);
  const ExperimentConfig written = config_from_json(nlohmann::json::parse(slurp(dir / "o" / "config.json")));
  CHECK(written.p == 1.9);
  CHECK(written.T == 0.2);
}

TEST_CASE("property batch is seed-deterministic") {
  const CliResult a = cli({"props", "--seed", "5", "--count", "200"});
  const CliResult b = cli({"props", "--seed", "5", "--count", "200"});
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.find("FAIL") == std::string::npos);
}

TEST_CASE("gronwall bundles from the command line") {
  const fs::path dir = scratch("bundle");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "zero.csv");
    f << "# pfluid-lab v1\n";
    for (const char* name : {"p,2", "lambda,0", "Lambda,1", "theta,0.5", "gamma0,1", "gamma1,1", "gamma2,1",
                             "gamma3,1", "k,0.01", "h,0.1"}) {
      f << "param," << name << '\n';
    }
    f << "m,a,b,r,s\n0,0,0,0,0\n1,0,0,0,0\n2,0,0,0,0\n";
  }
  const CliResult zero = cli({"gronwall", (dir / "zero.csv").string(), "--out", (dir / "v.json").string()});
  CHECK(zero.code == kExitOk);
  const nlohmann::json verdict = nlohmann::json::parse(slurp(dir / "v.json"));
  CHECK(verdict["conclusion"]["max_b_le_1"] == true);
  CHECK(verdict["conclusion"]["energy_bound"] == true);

  {
    std::ofstream f(dir / "broken.csv");
    f << slurp(dir / "zero.csv");
    f << "3,0,zero,0,0\n";
  }
  const CliResult broken = cli({"gronwall", (dir / "broken.csv").string()});
  CHECK(broken.code == kExitValidation);
  CHECK(broken.err.find("line 16") != std::string::npos);
}
