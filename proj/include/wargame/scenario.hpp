#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wargame/hex.hpp"

namespace wargame {

enum class Side : std::uint8_t { Blue = 0, Red = 1 };

constexpr Side opponent(Side s) { return s == Side::Blue ? Side::Red : Side::Blue; }
constexpr int side_index(Side s) { return static_cast<int>(s); }
std::string_view side_name(Side s);
std::optional<Side> parse_side(std::string_view name);

struct UnitTypeSpec {
  std::string name;
  int attack = 0;       // 0..10
  int defense = 0;      // 0..10
  int range = 0;        // hexes, >= 0
  int sight = 1;        // hexes, >= 1
  int mp_per_tick = 1;  // >= 1
  int max_strength = 1; // 1..10

  bool operator==(const UnitTypeSpec&) const = default;
};

struct ForceEntry {
  std::string id;
  std::string type_name;
  HexCoord pos;
  int strength = 1;

  bool operator==(const ForceEntry&) const = default;
};

struct Objective {
  Side side = Side::Blue;
  HexCoord pos;
  double weight = 1.0;

  bool operator==(const Objective&) const = default;
};

// Victory-point weights applied to the score components of one side.
struct VictoryWeights {
  double hold = 0.0;
  double inflicted = 0.0;
  double suffered = 0.0;
  double moved = 0.0;

  bool operator==(const VictoryWeights&) const = default;
};

struct ScenarioDoc {
  std::string name;
  int version = 1;
  GameMap map;
  std::vector<UnitTypeSpec> unit_types;
  std::array<std::vector<ForceEntry>, 2> forces;
  std::vector<Objective> objectives;
  std::array<VictoryWeights, 2> victory;
  int ticks_per_command = 10;
  int max_ticks = 100;
  bool deterministic_combat = false;

  const UnitTypeSpec* find_type(std::string_view type_name) const;
  bool operator==(const ScenarioDoc&) const = default;
};

// Checks every document invariant; throws ParseError (line 0) describing the
// first violation.
void validate_scenario(const ScenarioDoc& doc);

// Parses the line-oriented scenario language. Errors carry the 1-based line.
ScenarioDoc parse_scenario(std::string_view text);
ScenarioDoc load_scenario_file(const std::string& path);

// Canonical text form; parse_scenario(serialize_scenario(d)) == d.
std::string serialize_scenario(const ScenarioDoc& doc);

struct Perturbation {
  enum class Kind { JitterPositions, ScaleStrength, SwapObjective };
  Kind kind = Kind::JitterPositions;
  int radius = 0;           // JitterPositions
  double factor = 1.0;      // ScaleStrength
  int objective_index = 0;  // SwapObjective
  HexCoord hex;             // SwapObjective

  static Perturbation jitter(int radius) { return {Kind::JitterPositions, radius, 1.0, 0, {}}; }
  static Perturbation scale(double factor) { return {Kind::ScaleStrength, 0, factor, 0, {}}; }
  static Perturbation swap_objective(int index, HexCoord hex) { return {Kind::SwapObjective, 0, 1.0, index, hex}; }
};

// Deterministic under seed. Throws ParseError when no valid variant results.
ScenarioDoc generate_variant(const ScenarioDoc& doc, const Perturbation& perturbation, std::uint64_t seed);

// Immutable, indexed form of a validated scenario shared by every GameState
// instantiated from it. Units are identified by their index in `roster`,
// which is sorted by unit id.
struct RosterEntry {
  std::string id;
  Side side;
  int type;
  HexCoord start;
  int start_strength;
};

struct Rules {
  ScenarioDoc doc;
  std::vector<RosterEntry> roster;
  std::array<std::vector<int>, 2> side_roster;  // roster indices per side, ascending
  std::array<int, 2> initial_strength{};

  const GameMap& map() const { return doc.map; }
  const UnitTypeSpec& type_of(int roster_index) const { return doc.unit_types[roster[roster_index].type]; }
  std::optional<int> find_unit(std::string_view id) const;
  int unit_index(std::string_view id) const;  // throws RuleError when unknown
  const std::string& unit_id(int roster_index) const { return roster[roster_index].id; }
};

// Validates and indexes a scenario. Throws RuleError on overlapping
// placements or units on impassable terrain, ParseError on other violations.
std::shared_ptr<const Rules> compile_rules(const ScenarioDoc& doc);

}  // namespace wargame
