#include <algorithm>
#include <limits>

#include "doctest.h"
#include "support.hpp"
#include "wargame/errors.hpp"
#include "wargame/features.hpp"
#include "wargame/rng.hpp"
#include "wargame/scripts.hpp"

using namespace wargame;

TEST_CASE("script names round trip") {
  for (ScriptId id : kAllScripts) CHECK(parse_script(script_name(id)) == id);
  CHECK_FALSE(parse_script("charge").has_value());
}

TEST_CASE("constant and singleton scripts") {
  ScenarioDoc d = test::blank_doc(6, 6);
  test::add_unit(d, Side::Blue, "a", {2, 2});
  test::add_unit(d, Side::Red, "b", {3, 2});
  const GameState s = instantiate(d, 1, {false});
  const Observation o = observe_as_played(s, Side::Blue);
  CHECK(evaluate_script(ScriptId::HoldPosition, {}, o, 0) == UnitOrder::hold());
  CHECK(evaluate_script(ScriptId::AttackNearest, {}, o, 0) == UnitOrder::attack(1));
  CHECK(evaluate_script(ScriptId::ScoutPatrol, {}, o, 0) == UnitOrder::scout({2, 2}, 2));
  CHECK_THROWS_AS(evaluate_script(ScriptId::HoldPosition, {}, o, 1), RuleError);
}

TEST_CASE("withdraw moves away from a stronger local enemy") {
  ScenarioDoc d = test::blank_doc(7, 7);
  test::add_unit(d, Side::Blue, "a", {3, 3}, 4);
  test::add_unit(d, Side::Red, "b", {4, 3}, 6);
  const GameState s = instantiate(d, 1, {false});
  const Observation o = observe_as_played(s, Side::Blue);
  const UnitOrder w = evaluate_script(ScriptId::WithdrawIfOutnumbered, {1.0, 2}, o, 0);
  REQUIRE(w.kind == OrderKind::Move);
  int best = 0;
  for (HexCoord n : hex_neighbors({3, 3})) best = std::max(best, hex_distance(n, {4, 3}));
  CHECK(hex_distance(w.path()[0], {3, 3}) == 1);
  CHECK(hex_distance(w.path()[0], {4, 3}) == best);
  CHECK(best > hex_distance({3, 3}, {4, 3}));

  // With aggression 2 the same odds are acceptable and the unit attacks.
  CHECK(evaluate_script(ScriptId::WithdrawIfOutnumbered, {2.0, 2}, o, 0) == UnitOrder::attack(1));
}

TEST_CASE("advance heads for the nearest own objective") {
  const GameState s = instantiate(test::load("river-crossing.wg"), 1, {false});
  const Observation o = observe_as_played(s, Side::Blue);
  for (const Unit& u : o.own_units) {
    const UnitOrder m = evaluate_script(ScriptId::AdvanceToObjective, {}, o, u.id);
    REQUIRE(m.kind == OrderKind::Move);
    int nearest = std::numeric_limits<int>::max();
    for (const Objective& obj : o.rules->doc.objectives) {
      if (obj.side == Side::Blue) nearest = std::min(nearest, hex_distance(u.pos, obj.pos));
    }
    const HexCoord target = m.path().back();
    CHECK(hex_distance(u.pos, target) == nearest);
    CHECK(std::ranges::any_of(o.rules->doc.objectives,
                              [&](const Objective& obj) { return obj.side == Side::Blue && obj.pos == target; }));
  }
}

TEST_CASE("default-parameter scripts only emit listed orders") {
  auto rules = test::rules("river-crossing.wg");
  SplitMix64 rng(5);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    GameState s = instantiate(rules, seed);
    while (!s.terminal) {
      if (is_command_phase(s)) {
        for (Side side : {Side::Blue, Side::Red}) {
          const Observation o = observe_as_played(s, side);
          for (const Unit& u : o.own_units) {
            for (ScriptId id : kAllScripts) CHECK(is_listed_order(o, u.id, evaluate_script(id, {}, o, u.id)));
          }
          ScriptAssignment a(rules->side_roster[side_index(side)].size());
          for (auto& x : a) x = kAllScripts[rng.below(kScriptCount)];
          apply_orders(s, side, orders_from_assignment(o, a));
        }
      }
      step(s);
    }
  }
}

TEST_CASE("doctrine filter") {
  ScenarioDoc d = test::blank_doc(6, 6);
  d.map.set_terrain({3, 2}, Terrain::Woods);
  test::add_unit(d, Side::Blue, "a", {2, 2}, 4);
  test::add_unit(d, Side::Red, "b", {1, 2}, 3);
  const GameState s = instantiate(d, 1, {false});
  const Observation o = observe_as_played(s, Side::Blue);

  GlobalAction into_woods;
  into_woods.set(0, UnitOrder::move_to({3, 2}));
  CHECK(filter_doctrine(into_woods, {}, o) == into_woods);
  const GlobalAction filtered = filter_doctrine(into_woods, {ForbidEnterTerrain{Terrain::Woods}}, o);
  CHECK(*filtered.find(0) == UnitOrder::hold());

  GlobalAction attack;
  attack.set(0, UnitOrder::attack(1));
  CHECK(*filter_doctrine(attack, {ForbidAttackBelowOdds{1.5}}, o).find(0) == UnitOrder::hold());
  CHECK(*filter_doctrine(attack, {ForbidAttackBelowOdds{1.3}}, o).find(0) == UnitOrder::attack(1));

  GlobalAction far;
  far.set(0, UnitOrder::move_to({5, 5}));
  const std::vector<DoctrineRule> leash{ForbidBeyondHex{2}};
  const GlobalAction once = filter_doctrine(far, leash, o);
  CHECK(*once.find(0) == UnitOrder::hold());
  CHECK(filter_doctrine(once, leash, o) == once);
}

TEST_CASE("doctrine text") {
  const auto rules = parse_doctrine("# rules\nforbid_attack_below_odds 1.5\n\nforbid_enter_terrain water # wet\nforbid_beyond_hex 4\n");
  REQUIRE(rules.size() == 3);
  CHECK(std::get<ForbidAttackBelowOdds>(rules[0]).ratio == 1.5);
  CHECK(std::get<ForbidEnterTerrain>(rules[1]).terrain == Terrain::Water);
  CHECK(std::get<ForbidBeyondHex>(rules[2]).distance == 4);
  try {
    parse_doctrine("forbid_beyond_hex 2\nforbid_flying 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("feature vector") {
  GameState s = instantiate(test::load("tiny-duel.wg"), 1);
  const FeatureVector f = extract_features(observe_as_played(s, Side::Blue));
  CHECK(f[FeatureVector::OwnStrengthTotal] == 10.0);
  CHECK(f[FeatureVector::KnownEnemyStrength] == 0.0);
  CHECK(f[FeatureVector::VisibleEnemyCount] == 0.0);
  CHECK(f[FeatureVector::TickFraction] == 0.0);
  s.tick = 20;
  CHECK(extract_features(observe_as_played(s, Side::Blue))[FeatureVector::TickFraction] == doctest::Approx(0.5));
  CHECK(FeatureVector::kFeatureSetId == "wg-features-v1");
}
