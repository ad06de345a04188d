#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "wargame/interface.hpp"

namespace wargame {

// Closed portfolio; the integer values index bandit and search statistics.
enum class ScriptId : std::uint8_t {
  AdvanceToObjective = 0,
  HoldPosition = 1,
  ScoutPatrol = 2,
  WithdrawIfOutnumbered = 3,
  AttackNearest = 4,
};

inline constexpr int kScriptCount = 5;
inline constexpr std::array<ScriptId, kScriptCount> kAllScripts = {
    ScriptId::AdvanceToObjective, ScriptId::HoldPosition, ScriptId::ScoutPatrol,
    ScriptId::WithdrawIfOutnumbered, ScriptId::AttackNearest};

std::string_view script_name(ScriptId id);
std::optional<ScriptId> parse_script(std::string_view name);

struct ScriptParams {
  double aggression = 1.0;  // [0, 2]
  int scout_radius = 2;     // >= 1
};

// Maps an observation to one unit's order. The result is always accepted by
// is_valid_order for that unit; with default parameters it is one of
// legal_orders(obs, unit). Throws RuleError if the unit is not a live own unit.
UnitOrder evaluate_script(ScriptId id, const ScriptParams& params, const Observation& obs, int unit);

// One script per own unit, indexed like Rules::side_roster[side]. Dead units
// are skipped.
using ScriptAssignment = std::vector<ScriptId>;
GlobalAction orders_from_assignment(const Observation& obs, const ScriptAssignment& assignment,
                                    const ScriptParams& params = {});
GlobalAction uniform_assignment_orders(const Observation& obs, ScriptId id, const ScriptParams& params = {});

struct ForbidAttackBelowOdds {
  double ratio = 1.0;
};
struct ForbidEnterTerrain {
  Terrain terrain = Terrain::Woods;
};
struct ForbidBeyondHex {
  int distance = 0;  // from the unit's scenario start hex
};
using DoctrineRule = std::variant<ForbidAttackBelowOdds, ForbidEnterTerrain, ForbidBeyondHex>;

// Replaces every order that breaks a rule with Hold. Idempotent.
GlobalAction filter_doctrine(const GlobalAction& orders, const std::vector<DoctrineRule>& rules, const Observation& obs);
bool order_complies(const DoctrineRule& rule, const Unit& unit, const UnitOrder& order, const Observation& obs);

// One rule per line: `forbid_attack_below_odds <ratio>`,
// `forbid_enter_terrain <type>`, `forbid_beyond_hex <n>`; '#' comments.
std::vector<DoctrineRule> parse_doctrine(std::string_view text);

}  // namespace wargame
