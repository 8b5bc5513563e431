#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace tml;

namespace {

Model toy() {
  return th::parse_ok(
      "model toy\n"
      "machine m { create, process, release, transfer }\n"
      "machine n { transfer, receive, process }\n"
      "thing t\n"
      "flow t : m.create -> m.process\n");
}

}  // namespace

TEST_CASE("a full configuration parses into its fields") {
  Model m = toy();
  SimConfig cfg = th::config_ok(
      "# run setup\n"
      "seed = 42\n"
      "max_ticks = 17\n"
      "spawn = m.create @ 3 x 2\n"
      "spawn = m.create @ 5\n"
      "duration.process = 4\n"
      "accept.n = never\n",
      m);
  CHECK(cfg.seed == 42);
  CHECK(cfg.max_ticks == 17);
  REQUIRE(cfg.spawns.size() == 2);
  CHECK(cfg.spawns[0].stage.str() == "m.create");
  CHECK(cfg.spawns[0].tick == 3);
  CHECK(cfg.spawns[0].count == 2);
  CHECK(cfg.spawns[1].count == 1);  // count defaults to 1
  CHECK(cfg.duration(StageKind::Process) == 4);
  CHECK(cfg.duration(StageKind::Create) == 1);  // default
  CHECK(cfg.accept_policy("n") == AcceptPolicy::Never);
  CHECK(cfg.accept_policy("m") == AcceptPolicy::Always);  // default
}

TEST_CASE("an empty configuration is all defaults") {
  Model m = toy();
  SimConfig cfg = th::config_ok("", m);
  CHECK(cfg.seed == 0);
  CHECK(cfg.max_ticks == 100);
  CHECK(cfg.spawns.empty());
}

TEST_CASE("malformed configuration lines are config-error") {
  Model m = toy();
  for (const char* line :
       {"just words\n", "seed = many\n", "max_ticks = 0\n",
        "spawn = m.create\n", "spawn = m.process @ 1\n",
        "spawn = m.create @ 0\n", "spawn = m.create @ 2 x 0\n",
        "duration.dance = 2\n", "duration.process = 0\n",
        "accept.n = sometimes\n", "volume = 11\n"}) {
    INFO(line);
    ConfigResult r = parse_config(line, m);
    CHECK_FALSE(r.ok());
    CHECK(th::error_codes(r.diagnostics) ==
          std::vector<std::string>{"config-error"});
  }
}

TEST_CASE("configuration references must exist in the model") {
  Model m = toy();
  for (const char* line :
       {"spawn = ghost.create @ 1\n", "accept.ghost = never\n",
        "accept.m = never\n"}) {  // m has no accept or receive stage
    INFO(line);
    ConfigResult r = parse_config(line, m);
    CHECK_FALSE(r.ok());
    CHECK(th::error_codes(r.diagnostics) ==
          std::vector<std::string>{"config-reference"});
  }
}

TEST_CASE("all problems are reported at once with line numbers") {
  Model m = toy();
  ConfigResult r = parse_config(
      "seed = 1\n"
      "volume = 11\n"
      "spawn = ghost.create @ 1\n",
      m);
  CHECK_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 2);
  CHECK(r.diagnostics[0].code == "config-error");
  CHECK(r.diagnostics[0].span.line == 2);
  CHECK(r.diagnostics[1].code == "config-reference");
  CHECK(r.diagnostics[1].span.line == 3);
}
