#include "doctest.h"
#include "support.hpp"
#include "wargame/errors.hpp"
#include "wargame/interface.hpp"
#include "wargame/scripts.hpp"

using namespace wargame;

namespace {

GameState duel(std::uint64_t seed = 7, bool fog = true) { return instantiate(test::load("tiny-duel.wg"), seed, {fog}); }

}  // namespace

TEST_CASE("observation levels") {
  GameState s = duel();
  const Observation full = observe(s, Side::Blue, ObservationLevel::Full);
  CHECK(full.contacts.size() == 2);
  CHECK(full.own_units.size() == 2);
  const Observation fog = observe(s, Side::Blue, ObservationLevel::Fog);
  CHECK(fog.contacts.empty());
  CHECK(observe_as_played(s, Side::Red) == observe(s, Side::Red, ObservationLevel::Fog));
}

TEST_CASE("contact staleness counts ticks since the last sighting") {
  ScenarioDoc d = test::blank_doc(12, 1);
  d.max_ticks = 100;
  test::add_unit(d, Side::Blue, "a", {0, 0});
  test::add_unit(d, Side::Red, "b", {10, 0});
  GameState s = instantiate(d, 1);
  while (s.tick < 5) step(s);
  s.units[0].pos = {7, 0};
  REQUIRE(spot_attempt(s, 0, 1, 0.0));
  s.units[0].pos = {0, 0};
  while (s.tick < 9) step(s);
  const Observation o = observe(s, Side::Blue, ObservationLevel::Fog);
  REQUIRE(o.contacts.size() == 1);
  CHECK(o.contacts[0].staleness == 4);
  CHECK(o.contacts[0].last_seen_pos == HexCoord{10, 0});
  CHECK_FALSE(currently_spotted(s, Side::Blue, 1));
}

TEST_CASE("belief injection") {
  const GameState s = duel();
  const GameState none = inject_belief(s, Side::Blue, {});
  CHECK(total_strength(none, Side::Red) == 0);
  CHECK(none.units.size() == 2);

  BeliefAssumption truth;
  for (const Unit& u : s.units) {
    if (u.side == Side::Red) truth.placements.push_back({u.id, u.pos, u.strength});
  }
  CHECK(state_hash(inject_belief(s, Side::Blue, truth)) == state_hash(copy_state(s)));

  ScenarioDoc d = test::load("river-crossing.wg");
  const GameState r = instantiate(d, 1);
  BeliefAssumption wet{{{r.rules->side_roster[1][0], {6, 0}, 3}}};
  CHECK_THROWS_AS(inject_belief(r, Side::Blue, wet), RuleError);
  BeliefAssumption onto{{{r.rules->side_roster[1][0], r.units[0].pos, 3}}};
  CHECK_THROWS_AS(inject_belief(r, Side::Blue, onto), RuleError);
}

TEST_CASE("policy registration") {
  auto rules = test::rules("tiny-duel.wg");
  RunConfig cfg{rules, ObservationLevel::Fog, {}};
  Policy hold{"hold", {}, [](const Observation&) { return GlobalAction{}; }};
  Policy attack{"attack", {}, [](const Observation& o) { return uniform_assignment_orders(o, ScriptId::AttackNearest); }};
  cfg = register_policy(cfg, Side::Red, rules->side_roster[1], hold);
  CHECK_THROWS_AS(register_policy(cfg, Side::Red, {rules->side_roster[1][0]}, hold), RuleError);
  CHECK_THROWS_AS(register_policy(cfg, Side::Blue, {rules->side_roster[1][0]}, hold), RuleError);
  cfg = register_policy(cfg, Side::Blue, rules->side_roster[0], attack);

  GameState s = instantiate(rules, 4);
  const std::vector<HexCoord> red_start{s.units[2].pos, s.units[3].pos};
  while (!s.terminal) {
    advance(s, cfg);
    for (const Unit& u : s.units) {
      if (u.side == Side::Red) CHECK(u.pos == red_start[u.id - 2]);
    }
  }
}

TEST_CASE("registered and external orders coexist") {
  auto rules = test::rules("tiny-duel.wg");
  RunConfig cfg{rules, ObservationLevel::Fog, {}};
  Policy mover{"mover", {}, [](const Observation&) {
                 GlobalAction a;
                 a.set(0, UnitOrder::move_to({0, 3}));
                 a.set(1, UnitOrder::move_to({2, 4}));  // not registered: ignored
                 return a;
               }};
  cfg = register_policy(cfg, Side::Blue, {0}, mover);
  GameState s = instantiate(rules, 4);
  GlobalAction external;
  external.set(1, UnitOrder::move_to({1, 0}));
  apply_orders(s, Side::Blue, external);
  advance(s, cfg);
  CHECK(s.units[0].pos == HexCoord{0, 3});
  CHECK(s.units[1].order == UnitOrder::move_to({1, 0}));
}

TEST_CASE("space descriptors") {
  GameState s = duel();
  const SpaceDescriptors d = describe_spaces(s, Side::Blue);
  REQUIRE(d.actions.units.size() == 2);
  double product = 1.0;
  for (const auto& u : d.actions.units) {
    CHECK(u.order_count == static_cast<int>(legal_orders(s, u.unit).size()));
    product *= u.order_count;
  }
  CHECK(d.actions.joint_action_count == product);
  CHECK_FALSE(d.observations.fields.empty());

  s.units.erase(s.units.begin());
  const SpaceDescriptors after = describe_spaces(s, Side::Blue);
  REQUIRE(after.actions.units.size() == 1);
  CHECK(after.actions.units[0].id == "b2");
}

TEST_CASE("order validity under observation") {
  const GameState s = duel();
  const Observation o = observe(s, Side::Blue, ObservationLevel::Fog);
  CHECK(is_valid_order(o, 0, UnitOrder::hold()));
  CHECK_FALSE(is_valid_order(o, 0, UnitOrder::attack(2)));
  CHECK_FALSE(is_valid_order(o, 2, UnitOrder::hold()));
  CHECK(is_listed_order(o, 0, UnitOrder::scout({0, 4}, 2)));
  CHECK_THROWS_AS(legal_orders(o, 2), RuleError);
}
