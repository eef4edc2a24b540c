#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "cuspforms/serialize.hpp"

using namespace cuspforms;

TEST_SUITE_BEGIN("cli");

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs the driver binary with the given arguments, stderr folded into
// stdout, and returns the decoded exit status.
RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(CUSPFORM_CLI_PATH) + " " + args + " 2>&1";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0)
    r.output.append(buf, got);
  int status = pclose(pipe);
  REQUIRE(status != -1);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("transform-only run reports a passing involution audit") {
  RunResult r = run_cli("--check ft --report json");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.output);
  CHECK(j["pass"] == true);
  CHECK(j["fourier"]["involution"] == "pass");
  CHECK(j["lie"].is_null());
  CHECK(j["group"].is_null());
}

TEST_CASE("text report carries one overall verdict line") {
  RunResult r = run_cli("--check lie --report text");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("overall: PASS") != std::string::npos);
  CHECK(r.output.find("FAIL") == std::string::npos);
}

TEST_CASE("the default full run passes") {
  RunResult r = run_cli("--report json");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.output);
  CHECK(j["pass"] == true);
  CHECK(j["group"]["pass"] == true);
  CHECK(j["bch"]["pass"] == true);
  REQUIRE(j["finite_level"].is_array());
  CHECK(j["finite_level"][0]["pass"] == true);
}

TEST_CASE("invalid usage and rejected configurations exit 2") {
  CHECK(run_cli("--p 4 --check ft").exit_code == 2);
  CHECK(run_cli("--poly 2,0 --check ft").exit_code == 2);
  CHECK(run_cli("--check bogus").exit_code == 2);
  CHECK(run_cli("--definitely-not-a-flag").exit_code == 2);
  CHECK(run_cli("--report yaml --check ft").exit_code == 2);
  RunResult r = run_cli("--val-lambda 1 --check ft");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("threshold") != std::string::npos);
}

TEST_CASE("repeated runs emit byte-identical reports") {
  std::string args = "--outside-samples 5 --bch-pairs 5 --report json";
  RunResult a = run_cli(args);
  RunResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK_FALSE(a.output.empty());
}

TEST_CASE("dumped stage functions load back as well-formed values") {
  std::string path = "/tmp/cuspform_cli_dump.json";
  std::remove(path.c_str());
  RunResult r =
      run_cli("--check group --dump-functions " + path + " --report text");
  CHECK(r.exit_code == 0);
  Json dump = load_json(path);
  SchwartzFunction bump = schwartz_from_json(dump["bump"]);
  CHECK(bump.support_size() == 1);
  SchwartzFunction scaled = schwartz_from_json(dump["scaled"]);
  GroupFunction lift = group_function_from_json(dump["lift"]);
  CHECK(lift.table_function() == scaled);
  CHECK(lift.n_level() == 2);
  std::remove(path.c_str());
}

TEST_CASE("config file values load and flags override them") {
  std::string path = "/tmp/cuspform_cli_config.json";
  Json cfg;
  cfg["check"] = "ft";
  cfg["seed"] = 5;
  save_json(cfg, path);
  RunResult r = run_cli("--config " + path + " --check lie --report json");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.output);
  CHECK(j["config"]["check"] == "lie");  // the flag wins
  CHECK(j["config"]["seed"] == 5);       // the file supplies the rest
  CHECK_FALSE(j["lie"].is_null());
  std::remove(path.c_str());

  CHECK(run_cli("--config /tmp/does_not_exist_cuspform.json").exit_code == 2);
}

TEST_SUITE_END();
