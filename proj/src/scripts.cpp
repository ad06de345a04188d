#include "wargame/scripts.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "wargame/errors.hpp"

namespace wargame {

std::string_view script_name(ScriptId id) {
  switch (id) {
    case ScriptId::AdvanceToObjective: return "AdvanceToObjective";
    case ScriptId::HoldPosition: return "HoldPosition";
    case ScriptId::ScoutPatrol: return "ScoutPatrol";
    case ScriptId::WithdrawIfOutnumbered: return "WithdrawIfOutnumbered";
    case ScriptId::AttackNearest: return "AttackNearest";
  }
  return "HoldPosition";
}

std::optional<ScriptId> parse_script(std::string_view name) {
  for (ScriptId id : kAllScripts) {
    if (script_name(id) == name) return id;
  }
  return std::nullopt;
}

namespace {

UnitOrder advance_to_objective(const Observation& obs, const Unit& u) {
  const auto& objectives = obs.rules->doc.objectives;
  const bool has_own = std::ranges::any_of(objectives, [&](const Objective& o) { return o.side == obs.side; });
  const Objective* best = nullptr;
  int best_d = std::numeric_limits<int>::max();
  for (const Objective& o : objectives) {
    if (has_own && o.side != obs.side) continue;
    const int d = hex_distance(u.pos, o.pos);
    if (d < best_d) {
      best_d = d;
      best = &o;
    }
  }
  if (!best || best_d == 0) return UnitOrder::hold();
  const auto path = try_find_path(obs.map(), u.pos, best->pos);
  if (!path || path->empty()) return UnitOrder::hold();
  return UnitOrder::move_to(best->pos);
}

UnitOrder attack_nearest(const Observation& obs, const Unit& u) {
  const int range = obs.rules->doc.unit_types[u.type].range;
  const Contact* best = nullptr;
  std::tuple<bool, int, int> best_key{true, std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
  for (const Contact& c : obs.contacts) {
    const int d = hex_distance(u.pos, c.last_seen_pos);
    if (d > range) continue;
    const std::tuple<bool, int, int> key{c.staleness > 0, d, c.unit};
    if (!best || key < best_key) {
      best = &c;
      best_key = key;
    }
  }
  if (best) return UnitOrder::attack(best->unit);
  return advance_to_objective(obs, u);
}

double fractional_distance(double q, double r, HexCoord h) {
  const double dq = q - h.q;
  const double dr = r - h.r;
  return (std::abs(dq) + std::abs(dr) + std::abs(dq + dr)) / 2.0;
}

UnitOrder withdraw_if_outnumbered(const Observation& obs, const Unit& u, const ScriptParams& params) {
  constexpr int kLocalRadius = 3;
  double own_local = 0.0;
  for (const Unit& o : obs.own_units) {
    if (hex_distance(o.pos, u.pos) <= kLocalRadius) own_local += o.strength;
  }
  double enemy_local = 0.0;
  double cq = 0.0, cr = 0.0;
  int n = 0;
  for (const Contact& c : obs.contacts) {
    if (hex_distance(c.last_seen_pos, u.pos) > kLocalRadius) continue;
    enemy_local += c.last_seen_strength;
    cq += c.last_seen_pos.q;
    cr += c.last_seen_pos.r;
    ++n;
  }
  if (n == 0 || !(enemy_local > params.aggression * own_local)) return attack_nearest(obs, u);
  cq /= n;
  cr /= n;
  const double here = fractional_distance(cq, cr, u.pos);
  std::optional<HexCoord> best;
  double best_d = here;
  for (const HexCoord h : hex_neighbors(u.pos)) {
    if (!obs.map().passable(h)) continue;
    const bool blocked = std::ranges::any_of(obs.own_units, [h](const Unit& o) { return o.pos == h; }) ||
                         std::ranges::any_of(obs.contacts, [h](const Contact& c) { return c.last_seen_pos == h; });
    if (blocked) continue;
    const double d = fractional_distance(cq, cr, h);
    if (d > best_d + 1e-12 || (best && std::abs(d - best_d) <= 1e-12 && h < *best)) {
      best = h;
      best_d = d;
    }
  }
  if (!best) return UnitOrder::hold();
  return UnitOrder::move_to(*best);
}

}  // namespace

UnitOrder evaluate_script(ScriptId id, const ScriptParams& params, const Observation& obs, int unit) {
  const Unit* u = obs.own(unit);
  if (!u) throw RuleError("script target " + std::to_string(unit) + " is not a live unit of the observing side");
  UnitOrder order;
  switch (id) {
    case ScriptId::AdvanceToObjective: order = advance_to_objective(obs, *u); break;
    case ScriptId::HoldPosition: order = UnitOrder::hold(); break;
    case ScriptId::ScoutPatrol: order = UnitOrder::scout(u->pos, std::max(1, params.scout_radius)); break;
    case ScriptId::WithdrawIfOutnumbered: order = withdraw_if_outnumbered(obs, *u, params); break;
    case ScriptId::AttackNearest: order = attack_nearest(obs, *u); break;
  }
  if (!is_valid_order(obs, unit, order)) return UnitOrder::hold();
  return order;
}

GlobalAction orders_from_assignment(const Observation& obs, const ScriptAssignment& assignment,
                                    const ScriptParams& params) {
  const auto& roster = obs.rules->side_roster[side_index(obs.side)];
  GlobalAction action;
  for (std::size_t i = 0; i < roster.size() && i < assignment.size(); ++i) {
    if (!obs.own(roster[i])) continue;
    action.set(roster[i], evaluate_script(assignment[i], params, obs, roster[i]));
  }
  return action;
}

GlobalAction uniform_assignment_orders(const Observation& obs, ScriptId id, const ScriptParams& params) {
  const auto n = obs.rules->side_roster[side_index(obs.side)].size();
  return orders_from_assignment(obs, ScriptAssignment(n, id), params);
}

bool order_complies(const DoctrineRule& rule, const Unit& unit, const UnitOrder& order, const Observation& obs) {
  return std::visit(
      [&](const auto& r) -> bool {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, ForbidAttackBelowOdds>) {
          if (order.kind != OrderKind::Attack) return true;
          const Contact* c = obs.contact(order.target);
          if (!c) return true;
          const double odds = static_cast<double>(unit.strength) / std::max(1, c->last_seen_strength);
          return odds >= r.ratio;
        } else if constexpr (std::is_same_v<R, ForbidEnterTerrain>) {
          if (order.kind != OrderKind::Move) return true;
          return std::ranges::none_of(order.path(), [&](HexCoord h) {
            return obs.map().in_bounds(h) && obs.map().terrain(h) == r.terrain;
          });
        } else {
          const HexCoord start = obs.rules->roster[unit.id].start;
          if (order.kind == OrderKind::Move) {
            return std::ranges::none_of(order.path(), [&](HexCoord h) { return hex_distance(start, h) > r.distance; });
          }
          if (order.kind == OrderKind::Scout) return hex_distance(start, order.anchor) <= r.distance;
          return true;
        }
      },
      rule);
}

GlobalAction filter_doctrine(const GlobalAction& orders, const std::vector<DoctrineRule>& rules, const Observation& obs) {
  if (rules.empty()) return orders;
  GlobalAction out = orders;
  for (auto& cmd : out.orders) {
    const Unit* u = obs.own(cmd.unit);
    if (!u) continue;
    for (const auto& rule : rules) {
      if (!order_complies(rule, *u, cmd.order, obs)) {
        cmd.order = UnitOrder::hold();
        break;
      }
    }
  }
  return out;
}

std::vector<DoctrineRule> parse_doctrine(std::string_view text) {
  std::vector<DoctrineRule> rules;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream toks(line);
    std::string kw, arg, extra;
    if (!(toks >> kw)) continue;
    if (!(toks >> arg) || (toks >> extra)) throw ParseError(line_no, "doctrine rule needs exactly one argument");
    if (kw == "forbid_attack_below_odds") {
      double ratio = 0;
      auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), ratio);
      if (ec != std::errc() || p != arg.data() + arg.size() || ratio < 0) throw ParseError(line_no, "bad odds ratio");
      rules.emplace_back(ForbidAttackBelowOdds{ratio});
    } else if (kw == "forbid_enter_terrain") {
      auto t = parse_terrain(arg);
      if (!t) throw ParseError(line_no, "unknown terrain '" + arg + "'");
      rules.emplace_back(ForbidEnterTerrain{*t});
    } else if (kw == "forbid_beyond_hex") {
      int d = 0;
      auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), d);
      if (ec != std::errc() || p != arg.data() + arg.size() || d < 0) throw ParseError(line_no, "bad distance");
      rules.emplace_back(ForbidBeyondHex{d});
    } else {
      throw ParseError(line_no, "unknown doctrine rule '" + kw + "'");
    }
  }
  return rules;
}

}  // namespace wargame
