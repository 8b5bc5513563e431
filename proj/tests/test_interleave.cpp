#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace tml;

namespace {

InterleaveStep step(const std::string& stage, const std::string& thing) {
  auto r = detail::parse_stage_ref_text(stage);
  REQUIRE(r.has_value());
  return {*r, thing};
}

}  // namespace

TEST_CASE("a single linear machine admits exactly one order") {
  Model m = th::parse_ok(
      "model line\n"
      "machine a { create, process }\n"
      "thing item\n"
      "flow item : a.create -> a.process\n");
  SimConfig cfg = th::config_ok("spawn = a.create @ 1\n", m);
  std::vector<Interleaving> all = enumerate_interleavings(m, cfg);
  REQUIRE(all.size() == 1);
  CHECK(all[0] == Interleaving{step("a.create", "item#1"),
                               step("a.process", "item#1")});
}

TEST_CASE("two independent two-stage machines interleave 6 ways") {
  Model m = th::parse_ok(
      "model pair\n"
      "machine a { create, process }\n"
      "machine b { create, process }\n"
      "thing x\n"
      "thing y\n"
      "flow x : a.create -> a.process\n"
      "flow y : b.create -> b.process\n");
  SimConfig cfg = th::config_ok("spawn = a.create @ 1\nspawn = b.create @ 1\n",
                                m);
  std::vector<Interleaving> all = enumerate_interleavings(m, cfg);
  CHECK(all.size() == 6);  // interleavings of two chains of length 2
  // The timed run is one of them.
  CHECK(contains(all, projection(simulate(m, cfg))));
  // Both extremes are too.
  CHECK(contains(all, {step("a.create", "x#1"), step("a.process", "x#1"),
                       step("b.create", "y#1"), step("b.process", "y#1")}));
  CHECK(contains(all, {step("b.create", "y#1"), step("b.process", "y#1"),
                       step("a.create", "x#1"), step("a.process", "x#1")}));
}

TEST_CASE("a creation trigger fires only when its source is departed") {
  Model m = th::parse_ok(
      "model chain\n"
      "machine a { create, process }\n"
      "machine b { create, process }\n"
      "thing x\n"
      "thing y\n"
      "flow x : a.create -> a.process\n"
      "flow y : b.create -> b.process\n"
      "trigger a.create -> b.create\n");
  SimConfig cfg = th::config_ok("spawn = a.create @ 1\n", m);
  std::vector<Interleaving> all = enumerate_interleavings(m, cfg);
  // b cannot start until the thing leaves a.create, so the order is fixed.
  REQUIRE(all.size() == 1);
  CHECK(all[0] == Interleaving{
                      step("a.create", "x#1"),
                      step("a.process", "x#1"),
                      step("b.create", "y#1"),
                      step("b.process", "y#1"),
                  });
}

TEST_CASE("an armed gate constrains every order the same way time does") {
  Model m = th::parse_ok(
      "model gate\n"
      "machine a { create, release, transfer }\n"
      "machine b { transfer, receive, process }\n"
      "thing t\n"
      "flow t : a.create -> a.release\n"
      "flow t : a.release -> a.transfer\n"
      "flow t : a.transfer -> b.transfer\n"
      "flow t : b.transfer -> b.receive\n"
      "flow t : b.receive -> b.process\n"
      "trigger a.release -> b.transfer\n");
  SimConfig cfg = th::config_ok("spawn = a.create @ 1\n", m);
  std::vector<Interleaving> all = enumerate_interleavings(m, cfg);
  REQUIRE(all.size() == 1);
  CHECK(all[0].size() == 6);
  CHECK(contains(all, projection(simulate(m, cfg))));
}

TEST_CASE("a permanently closed gate leaves a maximal blocked sequence") {
  Model m = th::parse_ok(
      "model block\n"
      "machine a { create, release, transfer }\n"
      "machine b { transfer, receive }\n"
      "machine c { create, process }\n"
      "thing t\n"
      "thing u\n"
      "flow t : a.create -> a.release\n"
      "flow t : a.release -> a.transfer\n"
      "flow t : a.transfer -> b.transfer\n"
      "flow t : b.transfer -> b.receive\n"
      "flow u : c.create -> c.process\n"
      "trigger c.process -> b.transfer\n");
  SimConfig cfg = th::config_ok("spawn = a.create @ 1\n", m);
  std::vector<Interleaving> all = enumerate_interleavings(m, cfg);
  REQUIRE(all.size() == 1);
  CHECK(all[0] == Interleaving{
                      step("a.create", "t#1"),
                      step("a.release", "t#1"),
                      step("a.transfer", "t#1"),
                  });
  // The timed run stalls at the same point.
  SimConfig timed = th::config_ok("spawn = a.create @ 1\nmax_ticks = 6\n", m);
  CHECK(contains(all, projection(simulate(m, timed))));
}

TEST_CASE("the timed person run is one admissible order among many") {
  Model m = th::load(std::string(CORPUS_DIR) + "/person.tm");
  SimConfig cfg = th::config_ok(
      th::slurp(std::string(CORPUS_DIR) + "/person.cfg"), m);
  // Longest sequence is 11 firings, so a budget of 11 is exactly enough.
  std::vector<Interleaving> all = enumerate_interleavings(m, cfg, 11);
  CHECK(all.size() == 756);  // 2 fixed steps, then chains of 5, 2 and 2
  CHECK(contains(all, projection(simulate(m, cfg))));
}

TEST_CASE("budgets cut runaway enumerations") {
  Model m = th::load(std::string(CORPUS_DIR) + "/person.tm");
  SimConfig cfg = th::config_ok(
      th::slurp(std::string(CORPUS_DIR) + "/person.cfg"), m);
  std::string code;
  try {
    enumerate_interleavings(m, cfg, 5);
  } catch (const Error& e) {
    code = e.code();
  }
  CHECK(code == "budget-exceeded");
}

TEST_CASE("the sequence-count cap is enforced too") {
  Model m = th::parse_ok(
      "model pair\n"
      "machine a { create, process }\n"
      "machine b { create, process }\n"
      "thing x\n"
      "thing y\n"
      "flow x : a.create -> a.process\n"
      "flow y : b.create -> b.process\n");
  SimConfig cfg = th::config_ok("spawn = a.create @ 1\nspawn = b.create @ 1\n",
                                m);
  std::string code;
  try {
    enumerate_interleavings(m, cfg, 12, 5);  // 6 orders exist
  } catch (const Error& e) {
    code = e.code();
  }
  CHECK(code == "budget-exceeded");
}
