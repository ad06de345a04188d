#include "wargame/agents.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "planning.hpp"
#include "wargame/errors.hpp"

namespace wargame {

using planning::advance_cycle;
using planning::base_record;
using planning::evaluate_plan;

namespace {

constexpr std::array<std::pair<AgentKind, std::string_view>, 9> kKindNames = {{
    {AgentKind::Random, "random"},
    {AgentKind::Scripted, "scripted"},
    {AgentKind::Mcts, "mcts"},
    {AgentKind::Ismcts, "ismcts"},
    {AgentKind::Rhea, "rhea"},
    {AgentKind::Cmab, "cmab"},
    {AgentKind::Sss, "sss"},
    {AgentKind::TwoStage, "twoStage"},
    {AgentKind::Mpc, "mpc"},
}};

}  // namespace

std::string_view agent_kind_name(AgentKind k) {
  for (auto [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "random";
}

std::optional<AgentKind> parse_agent_kind(std::string_view name) {
  for (auto [kind, n] : kKindNames) {
    if (n == name) return kind;
  }
  return std::nullopt;
}

std::string AgentConfig::display_name() const {
  if (!name.empty()) return name;
  if (kind == AgentKind::Scripted && script_weights.empty()) {
    return "scripted:" + std::string(script_name(script));
  }
  return std::string(agent_kind_name(kind));
}

void validate_config(const AgentConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw RuleError(std::string("agent parameter out of range: ") + what);
  };
  require(c.budget.max_forward_calls >= 1, "budget_calls");
  require(!c.scripts.empty(), "scripts");
  require(c.script_params.aggression >= 0.0 && c.script_params.aggression <= 2.0, "aggression");
  require(c.script_params.scout_radius >= 1, "scout_radius");
  require(c.script_weights.empty() || c.script_weights.size() == kScriptCount, "script_weights");
  require(std::ranges::all_of(c.script_weights, [](double w) { return w >= 0.0; }), "script_weights");
  require(c.rollout_depth >= 0, "rollout_depth");
  require(c.exploration >= 0.0, "exploration");
  require(c.pw_c > 0.0, "pw_c");
  require(c.pw_alpha >= 0.0 && c.pw_alpha <= 1.0, "pw_alpha");
  require(c.max_depth >= 1, "max_depth");
  require(c.particles >= 1, "particles");
  require(c.horizon >= 1, "horizon");
  require(c.population >= 2, "population");
  require(c.elites >= 0 && c.elites < c.population, "elites");
  require(c.tournament >= 1, "tournament");
  require(c.crossover >= 0.0 && c.crossover <= 1.0, "crossover");
  require(c.mutation >= 0.0 && c.mutation <= 1.0, "mutation");
  require(c.epsilon >= 0.0 && c.epsilon <= 1.0, "epsilon");
  require(c.epsilon_local >= 0.0 && c.epsilon_local <= 1.0, "epsilon_local");
  require(c.inner != AgentKind::Mpc, "inner");
}

void set_agent_param(AgentConfig& c, std::string_view name, double v) {
  auto as_int = [v] { return static_cast<int>(std::lround(v)); };
  if (name == "exploration") c.exploration = v;
  else if (name == "pw_c") c.pw_c = v;
  else if (name == "pw_alpha") c.pw_alpha = v;
  else if (name == "max_depth") c.max_depth = as_int();
  else if (name == "rollout_depth") c.rollout_depth = as_int();
  else if (name == "horizon") c.horizon = as_int();
  else if (name == "population") c.population = as_int();
  else if (name == "mutation") c.mutation = v;
  else if (name == "crossover") c.crossover = v;
  else if (name == "epsilon") c.epsilon = v;
  else if (name == "epsilon_local") c.epsilon_local = v;
  else if (name == "aggression") c.script_params.aggression = v;
  else if (name == "scout_radius") c.script_params.scout_radius = as_int();
  else if (name == "w1") c.weights.vp = v;
  else if (name == "w2") c.weights.strength = v;
  else if (name == "w3") c.weights.spotted = v;
  else if (name == "w4") c.weights.distance = v;
  else if (name == "budget_calls") c.budget.max_forward_calls = static_cast<std::uint64_t>(std::max(1.0, v));
  else if (name.starts_with("weight.")) {
    auto id = parse_script(name.substr(7));
    if (!id) throw RuleError("unknown script in parameter '" + std::string(name) + "'");
    if (c.script_weights.empty()) c.script_weights.assign(kScriptCount, 1.0);
    c.script_weights[static_cast<int>(*id)] = v;
  } else {
    throw RuleError("unknown agent parameter '" + std::string(name) + "'");
  }
}

std::string action_summary(const Rules& rules, const GlobalAction& action) {
  std::string out;
  for (const auto& cmd : action.orders) {
    if (!out.empty()) out += ' ';
    out += rules.unit_id(cmd.unit);
    out += ':';
    const UnitOrder& o = cmd.order;
    out += order_kind_name(o.kind);
    switch (o.kind) {
      case OrderKind::Hold: break;
      case OrderKind::Move:
        for (HexCoord h : o.path()) out += "(" + std::to_string(h.q) + "," + std::to_string(h.r) + ")";
        break;
      case OrderKind::Attack: out += "(" + rules.unit_id(o.target) + ")"; break;
      case OrderKind::Scout:
        out += "(" + std::to_string(o.anchor.q) + "," + std::to_string(o.anchor.r) + "," + std::to_string(o.radius) + ")";
        break;
    }
  }
  return out.empty() ? "none" : out;
}

double heuristic_value(const GameState& s, Side side, const HeuristicWeights& w) {
  const Side opp = opponent(side);
  const Rules& rules = *s.rules;
  const double vp = victory_points(rules, s.score, side) - victory_points(rules, s.score, opp);
  const auto& table = s.contacts[side_index(side)];
  double own = 0.0, known = 0.0, spotted = 0.0;
  std::vector<Unit> mine;
  for (const Unit& u : s.units) {
    if (u.side == side) {
      own += u.strength;
      mine.push_back(u);
    }
  }
  for (int e : rules.side_roster[side_index(opp)]) {
    if (!s.fog) {
      if (const Unit* eu = s.find(e)) {
        known += eu->strength;
        spotted += 1.0;
      }
    } else if (table[e].known) {
      known += table[e].strength;
      if (table[e].tick == s.tick) spotted += 1.0;
    }
  }
  const double roster = std::max<std::size_t>(1, rules.side_roster[side_index(opp)].size());
  const double diameter = std::max(1, rules.map().diameter());
  const double dist = mean_distance_to_objective(rules, side, mine);
  return w.vp * vp + w.strength * (own - known) + w.spotted * (spotted / roster) + w.distance * (-dist / diameter);
}

double terminal_value(const GameState& s, Side side, const HeuristicWeights& w) {
  const double mine = victory_points(*s.rules, s.score, side);
  const double theirs = victory_points(*s.rules, s.score, opponent(side));
  if (mine > theirs) return w.vp;
  if (mine < theirs) return -w.vp;
  return 0.0;
}

double state_value(const GameState& s, Side side, const HeuristicWeights& w) {
  return s.terminal ? terminal_value(s, side, w) : heuristic_value(s, side, w);
}

RolloutPolicy random_script_policy(std::vector<ScriptId> scripts, ScriptParams params) {
  return [scripts = std::move(scripts), params](const Observation& obs, SplitMix64& rng) {
    const auto n = obs.rules->side_roster[side_index(obs.side)].size();
    return orders_from_assignment(obs, planning::random_assignment(n, scripts, rng), params);
  };
}

double rollout_value(const GameState& state, Side side, const RolloutPolicy& policy, int depth, std::uint64_t seed,
                     const HeuristicWeights& weights, SearchContext* ctx) {
  if (depth < 0) throw RuleError("rollout depth must be non-negative");
  if (state.terminal) return terminal_value(state, side, weights);
  if (depth == 0) return heuristic_value(state, side, weights);
  SearchContext unlimited(SearchBudget{std::numeric_limits<std::uint64_t>::max(), std::nullopt});
  SearchContext& c = ctx ? *ctx : unlimited;
  const RolloutPolicy& pol = policy ? policy : random_script_policy();
  GameState s = c.copy(state);
  s.rng = mix_seed(seed);
  SplitMix64 rng(derive_seed(seed, 3));
  for (int cycle = 0; cycle < depth && !s.terminal; ++cycle) {
    if (is_command_phase(s)) {
      const GlobalAction blue = pol(observe_as_played(s, Side::Blue), rng);
      const GlobalAction red = pol(observe_as_played(s, Side::Red), rng);
      apply_orders(s, Side::Blue, blue);
      apply_orders(s, Side::Red, red);
    }
    advance_cycle(c, s);
  }
  return state_value(s, side, weights);
}

namespace {

Decision single_choice(const Observation& obs, GlobalAction action, std::string agent) {
  Decision d;
  d.record.tick = obs.tick;
  d.record.side = obs.side;
  d.record.agent = std::move(agent);
  d.record.candidates.push_back({action_summary(*obs.rules, action), action, 1, 0.0});
  d.record.chosen = 0;
  d.action = std::move(action);
  return d;
}

}  // namespace

Decision random_decide(const Observation& obs, SplitMix64& rng) {
  GlobalAction action;
  for (const Unit& u : obs.own_units) {
    const auto orders = legal_orders(obs, u.id);
    action.set(u.id, orders[rng.below(orders.size())]);
  }
  return single_choice(obs, std::move(action), "random");
}

Decision scripted_decide(const Observation& obs, const AgentConfig& config, SplitMix64& rng) {
  const auto& roster = obs.rules->side_roster[side_index(obs.side)];
  ScriptAssignment a(roster.size(), config.script);
  if (!config.script_weights.empty()) {
    const double total = std::accumulate(config.script_weights.begin(), config.script_weights.end(), 0.0);
    for (auto& s : a) {
      if (!(total > 0.0)) {
        s = kAllScripts[rng.below(kScriptCount)];
        continue;
      }
      double x = rng.uniform() * total;
      int pick = kScriptCount - 1;
      for (int i = 0; i < kScriptCount; ++i) {
        x -= config.script_weights[i];
        if (x < 0.0) {
          pick = i;
          break;
        }
      }
      s = kAllScripts[pick];
    }
  }
  return single_choice(obs, orders_from_assignment(obs, a, config.script_params), config.display_name());
}

std::pair<std::vector<int>, int> stratify(const GameState& s, Side side) {
  const auto& roster = s.rules->side_roster[side_index(side)];
  std::map<StratumKey, int> index;
  std::vector<int> out(roster.size(), -1);
  for (std::size_t i = 0; i < roster.size(); ++i) {
    const Unit* u = s.find(roster[i]);
    if (!u) continue;
    StratumKey key;
    key.type = u->type;
    key.near_objective = mean_distance_to_objective(*s.rules, side, {*u}) <= 3.0;
    key.healthy = 2 * u->strength >= s.type_of(*u).max_strength;
    auto [it, fresh] = index.try_emplace(key, static_cast<int>(index.size()));
    out[i] = it->second;
  }
  return {out, static_cast<int>(index.size())};
}

namespace {

struct SssOutcome {
  Decision decision;
  ScriptAssignment assignment;  // per roster position
  std::uint64_t crn = 0;
};

ScriptAssignment expand_strata(const std::vector<int>& strata, const std::vector<ScriptId>& per_stratum) {
  ScriptAssignment a(strata.size(), ScriptId::HoldPosition);
  for (std::size_t i = 0; i < strata.size(); ++i) {
    if (strata[i] >= 0) a[i] = per_stratum[strata[i]];
  }
  return a;
}

SssOutcome sss_search(SearchContext& ctx, const GameState& root, Side side, const AgentConfig& cfg,
                      std::uint64_t seed) {
  planning::require_root(root);
  SplitMix64 rng(mix_seed(seed));
  const std::uint64_t crn = rng.next();
  const auto [strata, count] = stratify(root, side);
  const int cycles = std::max(1, cfg.rollout_depth);
  const auto& scripts = cfg.scripts;
  std::map<std::vector<ScriptId>, double> seen;

  auto evaluate = [&](const std::vector<ScriptId>& s) {
    if (auto it = seen.find(s); it != seen.end()) return it->second;
    const ScriptAssignment a = expand_strata(strata, s);
    const double v = evaluate_plan(ctx, root, side, std::span(&a, 1), cycles, cfg, crn);
    seen.emplace(s, v);
    return v;
  };
  auto random_point = [&] {
    std::vector<ScriptId> s(count);
    for (auto& x : s) x = scripts[rng.below(scripts.size())];
    return s;
  };

  std::optional<std::vector<ScriptId>> best;
  double best_v = -std::numeric_limits<double>::infinity();
  try {
    std::vector<ScriptId> current = random_point();
    double current_v = evaluate(current);
    best = current;
    best_v = current_v;
    const std::size_t space = [&] {
      std::size_t n = 1;
      for (int i = 0; i < count && n < 1'000'000; ++i) n *= scripts.size();
      return n;
    }();
    while (seen.size() < space) {
      std::vector<std::pair<int, ScriptId>> moves;
      for (int st = 0; st < count; ++st) {
        for (ScriptId sc : scripts) {
          if (sc != current[st]) moves.emplace_back(st, sc);
        }
      }
      for (std::size_t i = moves.size(); i > 1; --i) std::swap(moves[i - 1], moves[rng.below(i)]);
      bool improved = false;
      for (auto [st, sc] : moves) {
        auto next = current;
        next[st] = sc;
        const double v = evaluate(next);
        if (v > current_v) {
          current = std::move(next);
          current_v = v;
          improved = true;
          break;
        }
      }
      if (current_v > best_v) {
        best = current;
        best_v = current_v;
      }
      if (!improved) {
        for (int tries = 0; tries < 32; ++tries) {
          current = random_point();
          if (!seen.contains(current)) break;
        }
        current_v = evaluate(current);
        if (current_v > best_v) {
          best = current;
          best_v = current_v;
        }
      }
    }
  } catch (const BudgetExhausted&) {
  }
  if (!best) throw SearchError("search budget exhausted before one evaluation");

  SssOutcome out;
  out.crn = crn;
  out.assignment = expand_strata(strata, *best);
  const Observation obs = observe_as_played(root, side);
  out.decision.action = orders_from_assignment(obs, out.assignment, cfg.script_params);
  out.decision.record = base_record(root, side, cfg);
  std::vector<std::pair<double, std::vector<ScriptId>>> ranked;
  for (const auto& [k, v] : seen) ranked.emplace_back(v, k);
  std::ranges::stable_sort(ranked, [](const auto& a, const auto& b) { return a.first > b.first; });
  if (ranked.size() > 16) ranked.resize(16);
  for (const auto& [v, k] : ranked) {
    GlobalAction act = orders_from_assignment(obs, expand_strata(strata, k), cfg.script_params);
    if (k == *best) out.decision.record.chosen = static_cast<int>(out.decision.record.candidates.size());
    out.decision.record.candidates.push_back({action_summary(*root.rules, act), std::move(act), 1, v});
  }
  out.decision.record.iterations = seen.size();
  out.decision.record.forward_calls = ctx.used();
  return out;
}

}  // namespace

Decision sss_decide(const GameState& root, Side side, const SearchBudget& budget, const AgentConfig& config,
                    std::uint64_t seed) {
  SearchContext ctx(budget);
  return sss_search(ctx, root, side, config, seed).decision;
}

Decision two_stage_decide(const GameState& root, Side side, const SearchBudget& budget, const AgentConfig& config,
                          std::uint64_t seed) {
  SearchContext ctx(budget);
  SearchContext first = ctx.slice(budget.max_forward_calls / 2);
  SssOutcome stage1 = sss_search(first, root, side, config, seed);
  ctx.absorb(first);

  const Observation obs = observe_as_played(root, side);
  std::vector<int> refine;
  for (const Unit& u : obs.own_units) {
    const bool near = std::ranges::any_of(obs.contacts, [&](const Contact& c) {
      return hex_distance(c.last_seen_pos, u.pos) <= 3;
    });
    if (near) refine.push_back(u.id);
  }
  Decision out = std::move(stage1.decision);
  if (refine.empty()) {
    out.record.forward_calls = ctx.used();
    return out;
  }

  const int cycles = std::max(1, config.rollout_depth);
  GlobalAction current = out.action;
  const auto plan = std::span(&stage1.assignment, 1);
  std::uint64_t evaluations = 0;
  try {
    double current_v = evaluate_plan(ctx, root, side, plan, cycles, config, stage1.crn, &current);
    ++evaluations;
    bool improved = true;
    while (improved) {
      improved = false;
      for (int unit : refine) {
        const UnitOrder* held = current.find(unit);
        for (const UnitOrder& o : legal_orders(obs, unit)) {
          if (held && *held == o) continue;
          GlobalAction trial = current;
          trial.set(unit, o);
          const double v = evaluate_plan(ctx, root, side, plan, cycles, config, stage1.crn, &trial);
          ++evaluations;
          if (v > current_v) {
            current = std::move(trial);
            current_v = v;
            improved = true;
            held = current.find(unit);
          }
        }
      }
    }
  } catch (const BudgetExhausted&) {
  }
  if (!(current == out.action)) {
    out.record.candidates.push_back({action_summary(*root.rules, current), current, 1, 0.0});
    out.record.chosen = static_cast<int>(out.record.candidates.size()) - 1;
    out.action = std::move(current);
  }
  out.record.iterations += evaluations;
  out.record.forward_calls = ctx.used();
  return out;
}

Agent::Agent(AgentConfig config, std::uint64_t seed) : config_(std::move(config)), rng_(mix_seed(seed)) {
  validate_config(config_);
}

GlobalAction Agent::decide(const Observation& obs) {
  Decision d;
  const std::uint64_t seed = rng_.next();
  switch (config_.kind) {
    case AgentKind::Random: d = random_decide(obs, rng_); break;
    case AgentKind::Scripted: d = scripted_decide(obs, config_, rng_); break;
    case AgentKind::Ismcts: {
      if (!belief_ || belief_->side != obs.side) {
        belief_ = init_particles(obs, *obs.rules, config_.particles, derive_seed(seed, 1));
      } else {
        belief_ = update_particles(*belief_, obs, derive_seed(seed, 1));
      }
      d = ismcts_decide(obs, *belief_, config_.budget, config_, seed);
      break;
    }
    default: {
      const GameState root = state_from_observation(obs, derive_seed(seed, 2));
      switch (config_.kind) {
        case AgentKind::Mcts: d = mcts_decide(root, obs.side, config_.budget, config_, seed); break;
        case AgentKind::Rhea:
          d = rhea_decide(root, obs.side, config_.budget, config_, seed, config_.shift_buffer ? &memory_ : nullptr);
          break;
        case AgentKind::Cmab: d = cmab_decide(root, obs.side, config_.budget, config_, seed); break;
        case AgentKind::Sss: d = sss_decide(root, obs.side, config_.budget, config_, seed); break;
        case AgentKind::TwoStage: d = two_stage_decide(root, obs.side, config_.budget, config_, seed); break;
        case AgentKind::Mpc:
          d = mpc_decide(root, obs.side, config_.budget, config_, seed, config_.shift_buffer ? &memory_ : nullptr);
          break;
        default: break;
      }
    }
  }
  d.record.agent = config_.display_name();
  d.record.features = extract_features(obs);
  last_record_ = std::move(d.record);
  return d.action;
}

}  // namespace wargame
