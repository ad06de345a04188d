#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "wargame/engine.hpp"

namespace wargame {

enum class ObservationLevel : std::uint8_t { Full, Fog };

struct Contact {
  int unit = -1;  // enemy roster index
  HexCoord last_seen_pos;
  int last_seen_tick = 0;
  int type = 0;  // estimated type (roster type)
  int last_seen_strength = 0;
  int staleness = 0;
  bool operator==(const Contact&) const = default;
};

// Side-filtered view of a state. Terrain, objectives and the declared rosters
// are common knowledge (shared through `rules`).
struct Observation {
  Side side = Side::Blue;
  int tick = 0;
  ObservationLevel level = ObservationLevel::Fog;
  std::shared_ptr<const Rules> rules;
  std::vector<Unit> own_units;
  std::vector<Contact> contacts;
  std::vector<int> destroyed_enemies;
  ScoreVector score;

  const GameMap& map() const { return rules->map(); }
  const Unit* own(int unit) const;
  const Contact* contact(int unit) const;
  bool operator==(const Observation& o) const;
};

// Full: every live enemy as a fresh contact. Fog: exactly the side's contact table.
Observation observe(const GameState& state, Side side, ObservationLevel level);
// The level the side actually plays under (fog when the game has fog of war).
Observation observe_as_played(const GameState& state, Side side);

std::vector<UnitOrder> legal_orders(const Observation& obs, int unit);
bool is_listed_order(const Observation& obs, int unit, const UnitOrder& order);
// Structural legality for the observing side (what apply_orders would accept
// given these contacts).
bool is_valid_order(const Observation& obs, int unit, const UnitOrder& order);

struct Placement {
  int unit = -1;  // enemy roster index
  HexCoord pos;
  int strength = 1;
  bool operator==(const Placement&) const = default;
};

struct BeliefAssumption {
  std::vector<Placement> placements;
};

// Copy of `state` in which every enemy not currently spotted by `side` is
// replaced by the assumed placements. Throws RuleError on collisions with known
// units, impassable hexes, or invalid strengths.
GameState inject_belief(const GameState& state, Side side, const BeliefAssumption& assumption);

struct Policy {
  std::string name;
  std::map<std::string, double> params;
  std::function<GlobalAction(const Observation&)> decide;
};

struct PolicyRegistration {
  Side side;
  std::vector<int> units;
  Policy policy;
};

struct RunConfig {
  std::shared_ptr<const Rules> rules;
  ObservationLevel level = ObservationLevel::Fog;
  std::vector<PolicyRegistration> registrations;
};

// Throws RuleError when a unit belongs to the other side or is already registered.
RunConfig register_policy(RunConfig config, Side side, const std::vector<int>& units, Policy policy);

// At a command phase, queries every registered policy and applies the orders
// it gives for its own units; then steps the state.
void advance(GameState& state, const RunConfig& config);

struct UnitActionDescriptor {
  int unit = -1;
  std::string id;
  int order_count = 0;
  std::map<OrderKind, int> kinds;
};

struct ActionSpaceDescriptor {
  std::vector<UnitActionDescriptor> units;
  double joint_action_count = 1.0;  // product of per-unit counts
};

struct FieldDescriptor {
  std::string name;
  std::string type;
  std::string shape;
};

struct ObservationSpaceDescriptor {
  std::vector<FieldDescriptor> fields;
};

struct SpaceDescriptors {
  ActionSpaceDescriptor actions;
  ObservationSpaceDescriptor observations;
};

SpaceDescriptors describe_spaces(const GameState& state, Side side);

}  // namespace wargame
