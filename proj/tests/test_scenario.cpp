#include "doctest.h"
#include "support.hpp"
#include "wargame/errors.hpp"

using namespace wargame;

TEST_CASE("empty input is missing its header") {
  try {
    parse_scenario("");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("missing scenario header") != std::string::npos);
  }
}

TEST_CASE("tiny-duel fixture transcribes field by field") {
  const ScenarioDoc d = test::load("tiny-duel.wg");
  CHECK(d.name == "tiny-duel");
  CHECK(d.map.width() == 5);
  CHECK(d.map.height() == 5);
  CHECK(d.map.terrain({2, 2}) == Terrain::Hill);
  CHECK(d.map.terrain({1, 3}) == Terrain::Woods);
  CHECK(d.map.terrain({0, 0}) == Terrain::Clear);
  REQUIRE(d.forces[0].size() == 2);
  REQUIRE(d.forces[1].size() == 2);
  CHECK(d.forces[0][0] == ForceEntry{"b1", "infantry", {0, 4}, 6});
  CHECK(d.forces[1][1] == ForceEntry{"r2", "recon", {3, 0}, 4});
  CHECK(d.ticks_per_command == 4);
  CHECK(d.max_ticks == 40);
  CHECK_FALSE(d.deterministic_combat);
  CHECK(d.victory[0] == VictoryWeights{0.2, 1, -1, 0});
  REQUIRE(d.find_type("recon") != nullptr);
  CHECK(d.find_type("recon")->sight == 4);
}

TEST_CASE("every fixture survives a serialize round trip") {
  for (const char* name : {"tiny-duel.wg", "river-crossing.wg", "objective-hold.wg"}) {
    const ScenarioDoc d = test::load(name);
    CHECK(parse_scenario(serialize_scenario(d)) == d);
  }
  CHECK(test::load("objective-hold.wg").forces[0].size() == 20);
}

TEST_CASE("parse errors carry the line number") {
  const std::string text = "scenario \"x\" version 1\nmap 3 3\nunittype a atk 5 def 5 range 1 sight 2 mp 1\n";
  try {
    parse_scenario(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("overlapping placements are rejected") {
  ScenarioDoc d = test::blank_doc(4, 4);
  test::add_unit(d, Side::Blue, "a", {1, 1});
  test::add_unit(d, Side::Red, "b", {1, 1});
  CHECK_THROWS_AS(compile_rules(d), RuleError);
}

TEST_CASE("unit on water is rejected") {
  ScenarioDoc d = test::blank_doc(4, 4);
  d.map.set_terrain({2, 2}, Terrain::Water);
  test::add_unit(d, Side::Blue, "a", {2, 2});
  test::add_unit(d, Side::Red, "b", {0, 0});
  CHECK_THROWS_AS(compile_rules(d), RuleError);
}

TEST_CASE("roster is indexed by sorted unit id") {
  auto r = test::rules("tiny-duel.wg");
  REQUIRE(r->roster.size() == 4);
  CHECK(r->unit_id(0) == "b1");
  CHECK(r->unit_id(3) == "r2");
  CHECK(r->side_roster[1] == std::vector<int>{2, 3});
  CHECK(r->initial_strength[0] == 10);
  CHECK_THROWS_AS(r->unit_index("zz"), RuleError);
}

TEST_CASE("variant generation") {
  const ScenarioDoc d = test::load("river-crossing.wg");
  CHECK(generate_variant(d, Perturbation::jitter(0), 5) == d);
  CHECK(generate_variant(d, Perturbation::scale(1.0), 5) == d);
  const ScenarioDoc a = generate_variant(d, Perturbation::jitter(1), 3);
  const ScenarioDoc b = generate_variant(d, Perturbation::jitter(1), 3);
  CHECK(a == b);
  for (int s = 0; s < 2; ++s) {
    for (std::size_t i = 0; i < d.forces[s].size(); ++i) {
      CHECK(hex_distance(a.forces[s][i].pos, d.forces[s][i].pos) <= 1);
    }
  }
  const ScenarioDoc half = generate_variant(d, Perturbation::scale(0.5), 1);
  CHECK(half.forces[0][0].strength == 3);
  const ScenarioDoc moved = generate_variant(d, Perturbation::swap_objective(0, {0, 0}), 1);
  CHECK(moved.objectives[0].pos == HexCoord{0, 0});
  CHECK_THROWS_AS(generate_variant(d, Perturbation::swap_objective(0, {6, 0}), 1), ParseError);
}
