#pragma once

// Helpers shared by the planning agents.

#include <span>

#include "wargame/agents.hpp"
#include "wargame/errors.hpp"

namespace wargame::planning {

inline void require_root(const GameState& root) {
  if (root.terminal) throw SearchError("cannot plan from a terminal state");
  if (!is_command_phase(root)) throw SearchError("planning requires a command-phase state");
}

// Steps until the next command phase or the end of the game.
inline void advance_cycle(SearchContext& ctx, GameState& s) {
  do {
    ctx.step(s);
  } while (!s.terminal && !is_command_phase(s));
}

inline ScriptAssignment random_assignment(std::size_t n, std::span<const ScriptId> scripts, SplitMix64& rng) {
  ScriptAssignment a(n);
  for (auto& s : a) s = scripts[rng.below(scripts.size())];
  return a;
}

inline std::size_t roster_size(const GameState& s, Side side) { return s.rules->side_roster[side_index(side)].size(); }

inline GlobalAction orders_for(const GameState& s, Side side, const ScriptAssignment& a, const ScriptParams& params) {
  return orders_from_assignment(observe_as_played(s, side), a, params);
}

inline GlobalAction opponent_orders(const GameState& s, Side opp, const AgentConfig& cfg, SplitMix64& rng) {
  const auto n = roster_size(s, opp);
  if (cfg.opponent_script) return orders_for(s, opp, ScriptAssignment(n, *cfg.opponent_script), {});
  return orders_for(s, opp, random_assignment(n, kAllScripts, rng), {});
}

// Plays `cycles` command cycles from a copy of `root`: the side follows
// `plan` (last entry repeated; `first`, when given, replaces the first
// cycle's orders), the opponent follows the configured model. Chance is
// drawn fresh from `seed`.
inline double evaluate_plan(SearchContext& ctx, const GameState& root, Side side, std::span<const ScriptAssignment> plan,
                            int cycles, const AgentConfig& cfg, std::uint64_t seed,
                            const GlobalAction* first = nullptr) {
  GameState s = ctx.copy(root);
  s.rng = mix_seed(seed);
  SplitMix64 opp_rng(derive_seed(seed, 7));
  const Side opp = opponent(side);
  for (int c = 0; c < cycles && !s.terminal; ++c) {
    GlobalAction mine;
    if (c == 0 && first) {
      mine = *first;
    } else if (!plan.empty()) {
      mine = orders_for(s, side, plan[std::min<std::size_t>(c, plan.size() - 1)], cfg.script_params);
    }
    const GlobalAction theirs = opponent_orders(s, opp, cfg, opp_rng);
    apply_orders(s, side, mine);
    apply_orders(s, opp, theirs);
    advance_cycle(ctx, s);
  }
  return state_value(s, side, cfg.weights);
}

inline DecisionRecord base_record(const GameState& root, Side side, const AgentConfig& cfg) {
  DecisionRecord r;
  r.tick = root.tick;
  r.side = side;
  r.agent = cfg.display_name();
  return r;
}

}  // namespace wargame::planning
