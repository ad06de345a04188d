#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wargame/hex.hpp"
#include "wargame/scenario.hpp"

namespace wargame {

enum class OrderKind : std::uint8_t { Hold, Move, Attack, Scout };

std::string_view order_kind_name(OrderKind k);

inline constexpr int kMaxWaypoints = 3;

// One unit's standing order. Fixed-size so that units (and whole states) copy
// without allocation. Unit references are roster indices.
struct UnitOrder {
  OrderKind kind = OrderKind::Hold;
  std::uint8_t waypoint_count = 0;
  std::array<HexCoord, kMaxWaypoints> waypoints{};
  int target = -1;
  HexCoord anchor{};
  int radius = 0;

  static UnitOrder hold() { return {}; }
  // Throws RuleError unless 1..3 waypoints are given.
  static UnitOrder move(std::span<const HexCoord> path);
  static UnitOrder move_to(HexCoord h) { return move(std::span<const HexCoord>(&h, 1)); }
  static UnitOrder attack(int target_unit);
  static UnitOrder scout(HexCoord anchor, int radius);

  std::span<const HexCoord> path() const { return {waypoints.data(), waypoint_count}; }
  bool operator==(const UnitOrder& o) const;
};

enum class Stance : std::uint8_t { Engage, HoldFire };

struct Unit {
  int id = -1;  // roster index
  Side side = Side::Blue;
  int type = 0;
  HexCoord pos;
  int strength = 0;
  int mp = 0;
  UnitOrder order;
  Stance stance = Stance::Engage;
};

struct UnitCommand {
  int unit = -1;
  UnitOrder order;
  bool operator==(const UnitCommand&) const = default;
};

// Command-phase order set for one side, kept sorted by unit.
struct GlobalAction {
  std::vector<UnitCommand> orders;

  void set(int unit, const UnitOrder& order);
  const UnitOrder* find(int unit) const;
  bool empty() const { return orders.empty(); }
  bool operator==(const GlobalAction&) const = default;
};

enum class ChancePurpose : std::uint8_t { Combat, Spotting };

// One move of the chance player. subjects = (attacker, defender) for combat,
// (observer, target) for spotting.
struct ChanceEvent {
  int tick = 0;
  std::uint32_t seq = 0;
  ChancePurpose purpose = ChancePurpose::Combat;
  std::array<int, 2> subjects{-1, -1};
  std::uint64_t draw = 0;  // raw 64-bit generator output; uniform = top 53 bits / 2^53
  int outcome = 0;         // casualties, or 1/0 for spotted
  bool operator==(const ChanceEvent&) const = default;
};

struct ScoreVector {
  std::array<double, 2> objectives_held{};  // objective weight accrued per tick held
  std::array<std::int64_t, 2> inflicted{};
  std::array<std::int64_t, 2> suffered{};
  std::array<std::int64_t, 2> mp_expended{};
  bool operator==(const ScoreVector&) const = default;
};

enum class Termination : std::uint8_t { TickLimit = 1, EliminationBlue = 2, EliminationRed = 3 };
std::string_view termination_name(Termination t);
std::optional<Termination> parse_termination(std::string_view s);

struct ContactEntry {
  bool known = false;
  HexCoord pos;
  int tick = 0;
  int strength = 0;
  bool operator==(const ContactEntry&) const = default;
};

// Recorded chance outcomes fed back in place of the generator (replay mode).
struct ChanceReplay {
  std::vector<ChanceEvent> events;
  std::size_t cursor = 0;
  // Tick of the first event whose recorded outcome disagrees with the rules
  // applied to its recorded draw, or whose subjects do not match.
  std::optional<int> first_mismatch_tick;
};

struct GameState {
  int tick = 0;
  std::shared_ptr<const Rules> rules;
  std::vector<Unit> units;  // live units, ascending id
  ScoreVector score;
  std::uint64_t rng = 0;
  std::vector<ChanceEvent> chance_log;
  std::array<std::vector<ContactEntry>, 2> contacts;  // [observing side][enemy roster index]
  std::optional<Termination> terminal;
  bool fog = true;

  std::uint32_t chance_seq = 0;
  bool record_chance = true;
  std::shared_ptr<ChanceReplay> replay;

  const GameMap& map() const { return rules->map(); }
  int ticks_per_command() const { return rules->doc.ticks_per_command; }
  const UnitTypeSpec& type_of(const Unit& u) const { return rules->doc.unit_types[u.type]; }
  const Unit* find(int unit) const;
  Unit* find(int unit);
  const Unit* unit_at(HexCoord h) const;
};

struct InstantiateOptions {
  bool fog = true;
};

GameState instantiate(std::shared_ptr<const Rules> rules, std::uint64_t seed, InstantiateOptions options = {});
GameState instantiate(const ScenarioDoc& scenario, std::uint64_t seed, InstantiateOptions options = {});

// Advances the state by one tick: movement, spotting, simultaneous combat,
// scoring and the termination check.
void step(GameState& state);

// Replaces the standing orders of the referenced units. All orders are checked
// before any is applied; throws RuleError on the first illegal one.
void apply_orders(GameState& state, Side side, const GlobalAction& action);

GameState copy_state(const GameState& state);

bool is_command_phase(const GameState& state);

// An enemy currently known to a side, as seen by the order generator.
struct KnownContact {
  int unit = -1;
  HexCoord pos;
};

// Discretised order set: Hold, Attack per contact in weapon range, Move to each
// passable neighbour and each objective hex, Scout(pos, 2).
std::vector<UnitOrder> legal_orders(const GameState& state, int unit);
std::vector<UnitOrder> enumerate_orders(const Rules& rules, const Unit& unit, std::span<const KnownContact> contacts);

// Structural legality used by apply_orders (a superset of legal_orders: moves
// may carry up to three arbitrary passable waypoints).
void check_order(const GameState& state, Side side, const Unit& unit, const UnitOrder& order);

bool line_of_sight(const GameMap& map, HexCoord from, HexCoord to);
double hit_probability(int attack, int defense, int terrain_modifier);
double spot_probability(int distance, int sight, double target_concealment);
// Smallest k with Binomial(n, p) CDF(k) > u.
int binomial_inverse_cdf(int n, double p, double u);

bool currently_spotted(const GameState& state, Side observer_side, int enemy);

// Single combat resolution applied immediately (outside the simultaneous tick
// resolution of step). Returns casualties.
int resolve_combat(GameState& state, int attacker, int defender, double uniform);
bool spot_attempt(GameState& state, int observer, int target, double uniform);

struct ScoreReport {
  ScoreVector score;
  std::array<double, 2> vp{};
};
ScoreReport score_state(const GameState& state);
double victory_points(const Rules& rules, const ScoreVector& score, Side side);

std::optional<Termination> check_terminal(const GameState& state);
int total_strength(const GameState& state, Side side);

// FNV-1a 64 over the canonical serialization; excludes the chance log.
std::uint64_t state_hash(const GameState& state);
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

double draw_uniform(GameState& state);

}  // namespace wargame
