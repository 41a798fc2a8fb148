#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "nonholo/chart_io.hpp"
#include "nonholo/errors.hpp"
#include "nonholo/runner.hpp"

using namespace nonholo;
namespace fs = std::filesystem;

namespace {

const fs::path data_dir = NONHOLO_DATA_DIR;

std::vector<fs::path> shipped_configs() {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(data_dir / "configs"))
    if (e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

struct Shell {
  int status;
  std::string out;
};

Shell shell(const std::string& args) {
  const fs::path tmp = fs::temp_directory_path() / ("nonholo_cli_" + std::to_string(std::rand()) + ".out");
  const std::string cmd = std::string("\"") + NONHOLO_CLI_PATH + "\" " + args + " > \"" + tmp.string() + "\" 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(tmp);
  return {WEXITSTATUS(raw), ss.str()};
}

}  // namespace

TEST_CASE("shipped configs round-trip and validate") {
  const auto files = shipped_configs();
  REQUIRE(files.size() >= 10);
  for (const auto& f : files) {
    CAPTURE(f.string());
    const RunConfig c = parse_run_config_file(f);
    CHECK_NOTHROW(validate(c));
    CHECK(run_config_from_json(run_config_to_json(c)) == c);
    const RunConfig r = resolve(c);
    CHECK(run_config_from_json(nlohmann::json::parse(run_config_to_json(r).dump())) == r);
  }
}

TEST_CASE("artifacts are deterministic and carry their config") {
  for (const auto& f : shipped_configs()) {
    CAPTURE(f.string());
    const RunConfig c = parse_run_config_file(f);
    const std::string a = execute(c, f.parent_path());
    const std::string b = execute(c, f.parent_path());
    CHECK(a == b);
    CHECK(embedded_config(a) == resolve(c));
    // the embedded config reproduces the artifact
    CHECK(execute(embedded_config(a), f.parent_path()) == a);
  }
}

TEST_CASE("config validation") {
  nlohmann::json j = {{"command", "tensors"}, {"chart_path", "sphere.json"}, {"point", {1.0, 0.5}}, {"frob", 1}};
  try {
    run_config_from_json(j);
    FAIL("expected Validation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("frob") != std::string::npos);
  }
  j.erase("frob");
  RunConfig c = run_config_from_json(j);
  CHECK_NOTHROW(validate(c));

  auto rejects = [](RunConfig bad) {
    try {
      validate(bad);
    } catch (const Error& e) {
      return e.kind() == ErrorKind::Validation;
    }
    return false;
  };
  RunConfig bad = c;
  bad.command = "frob";
  CHECK(rejects(bad));
  bad = c;
  bad.point.clear();
  CHECK(rejects(bad));
  bad = c;
  bad.tolerance_profile = "sloppy";
  CHECK(rejects(bad));
  bad = c;
  bad.epsilon = -1;
  CHECK(rejects(bad));
  bad = c;
  bad.measure = "exact";
  CHECK(rejects(bad));
  bad = c;
  bad.eps_ladder = {0.01};
  CHECK(rejects(bad));
  bad = c;
  bad.command = "variation";
  bad.velocity = {1.0, 0.0};
  CHECK(rejects(bad));
  bad = c;
  bad.command = "burgers";
  CHECK(rejects(bad));
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ErrorKind::Parse) == 2);
  CHECK(exit_code(ErrorKind::Io) == 2);
  CHECK(exit_code(ErrorKind::Validation) == 2);
  CHECK(exit_code(ErrorKind::DimensionMismatch) == 2);
  CHECK(exit_code(ErrorKind::GridMismatch) == 2);
  CHECK(exit_code(ErrorKind::SingularPoint) == 3);
  CHECK(exit_code(ErrorKind::GridTooCoarse) == 3);
  CHECK(exit_code(ErrorKind::EigenFailure) == 3);

  RunConfig c;
  c.command = "tensors";
  c.chart_path = "no_such_chart.json";
  c.point = {1.0, 0.5};
  std::ostringstream out;
  CHECK(run(c, out) == 2);
  const auto err = nlohmann::json::parse(out.str());
  CHECK(err["error"]["kind"] == "IoError");

  c.chart_path = "polar.json";
  c.point = {0.0, 0.5};
  std::ostringstream out2;
  CHECK(run(c, out2) == 3);
  CHECK(nlohmann::json::parse(out2.str())["error"]["kind"] == "SingularPoint");
}

TEST_CASE("tensors output on the sphere") {
  RunConfig c;
  c.command = "tensors";
  c.chart_path = "sphere.json";
  c.point = {1.0, 0.3};
  const auto j = nlohmann::json::parse(execute(c));
  CHECK(j["scalar"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(j["cartan_scalar"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(j["metric"][1][1].get<double>() == doctest::Approx(std::pow(std::sin(1.0), 2)));
  c.output_format = "csv";
  const std::string csv = execute(c);
  CHECK(csv.rfind("# config: ", 0) == 0);
  CHECK(csv.find("tensor,index,value") != std::string::npos);
}

TEST_CASE("command-line binary") {
  const std::string cfg = (data_dir / "configs" / "burgers_dislocation.json").string();
  const Shell a = shell("--config \"" + cfg + "\"");
  const Shell b = shell("--config \"" + cfg + "\"");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["b"][1].get<double>() == doctest::Approx(2 * std::numbers::pi * 0.1).epsilon(1e-4));

  // flags override the config file
  const Shell c = shell("--config \"" + cfg + "\" burgers --param eps=0.05");
  CHECK(c.status == 0);
  CHECK(nlohmann::json::parse(c.out)["b"][1].get<double>() ==
        doctest::Approx(2 * std::numbers::pi * 0.05).epsilon(1e-4));

  const Shell t = shell("tensors --chart sphere.json --at 1.0,0.5");
  CHECK(t.status == 0);
  CHECK(nlohmann::json::parse(t.out)["scalar"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));

  const Shell bad = shell("tensors --chart sphere.json");
  CHECK(bad.status == 2);
  CHECK(nlohmann::json::parse(bad.out)["error"]["kind"] == "ValidationError");

  const Shell parse = shell("tensors --chart sphere.json --at 1,0.5 --frob");
  CHECK(parse.status == 2);

  const Shell sing = shell("tensors --chart polar.json --at 0,0.5");
  CHECK(sing.status == 3);

  const fs::path out = fs::temp_directory_path() / "nonholo_cli_spectrum.csv";
  const Shell s = shell("spectrum --manifold ring --points 128 --ladder 0.04,0.02 --levels 3 --format csv --out \"" +
                        out.string() + "\"");
  CHECK(s.status == 0);
  std::ifstream in(out);
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("# config: ", 0) == 0);
  fs::remove(out);
}
