#include "wargame/interface.hpp"

#include <algorithm>
#include <set>

#include "wargame/errors.hpp"

namespace wargame {

const Unit* Observation::own(int unit) const {
  for (const Unit& u : own_units) {
    if (u.id == unit) return &u;
  }
  return nullptr;
}

const Contact* Observation::contact(int unit) const {
  for (const Contact& c : contacts) {
    if (c.unit == unit) return &c;
  }
  return nullptr;
}

bool Observation::operator==(const Observation& o) const {
  auto same_units = [](const std::vector<Unit>& a, const std::vector<Unit>& b) {
    return std::ranges::equal(a, b, [](const Unit& x, const Unit& y) {
      return x.id == y.id && x.side == y.side && x.type == y.type && x.pos == y.pos && x.strength == y.strength &&
             x.mp == y.mp && x.order == y.order && x.stance == y.stance;
    });
  };
  return side == o.side && tick == o.tick && level == o.level && rules == o.rules && same_units(own_units, o.own_units) &&
         contacts == o.contacts && destroyed_enemies == o.destroyed_enemies && score == o.score;
}

Observation observe(const GameState& state, Side side, ObservationLevel level) {
  Observation obs;
  obs.side = side;
  obs.tick = state.tick;
  obs.level = level;
  obs.rules = state.rules;
  obs.score = state.score;
  for (const Unit& u : state.units) {
    if (u.side == side) obs.own_units.push_back(u);
  }
  const auto& table = state.contacts[side_index(side)];
  for (int e : state.rules->side_roster[side_index(opponent(side))]) {
    const Unit* eu = state.find(e);
    if (!eu) {
      obs.destroyed_enemies.push_back(e);
      continue;
    }
    if (level == ObservationLevel::Full) {
      obs.contacts.push_back({e, eu->pos, state.tick, eu->type, eu->strength, 0});
    } else if (table[e].known) {
      const auto& c = table[e];
      obs.contacts.push_back({e, c.pos, c.tick, state.rules->roster[e].type, c.strength, state.tick - c.tick});
    }
  }
  return obs;
}

Observation observe_as_played(const GameState& state, Side side) {
  return observe(state, side, state.fog ? ObservationLevel::Fog : ObservationLevel::Full);
}

namespace {

std::vector<KnownContact> known_contacts(const Observation& obs) {
  std::vector<KnownContact> out;
  out.reserve(obs.contacts.size());
  for (const Contact& c : obs.contacts) out.push_back({c.unit, c.last_seen_pos});
  return out;
}

}  // namespace

std::vector<UnitOrder> legal_orders(const Observation& obs, int unit) {
  const Unit* u = obs.own(unit);
  if (!u) throw RuleError("legal_orders: unit " + std::to_string(unit) + " is not a live unit of the observing side");
  const auto contacts = known_contacts(obs);
  return enumerate_orders(*obs.rules, *u, contacts);
}

bool is_listed_order(const Observation& obs, int unit, const UnitOrder& order) {
  const auto orders = legal_orders(obs, unit);
  return std::find(orders.begin(), orders.end(), order) != orders.end();
}

bool is_valid_order(const Observation& obs, int unit, const UnitOrder& order) {
  if (!obs.own(unit)) return false;
  const GameMap& map = obs.map();
  switch (order.kind) {
    case OrderKind::Hold: return true;
    case OrderKind::Move:
      if (order.waypoint_count < 1 || order.waypoint_count > kMaxWaypoints) return false;
      return std::ranges::all_of(order.path(), [&](HexCoord h) { return map.passable(h); });
    case OrderKind::Attack: return obs.contact(order.target) != nullptr;
    case OrderKind::Scout: return order.radius >= 1 && map.in_bounds(order.anchor);
  }
  return false;
}

GameState inject_belief(const GameState& state, Side side, const BeliefAssumption& assumption) {
  GameState out = copy_state(state);
  const Side enemy = opponent(side);
  std::erase_if(out.units,
                [&](const Unit& u) { return u.side == enemy && !currently_spotted(state, side, u.id); });
  std::set<int> placed;
  for (const Placement& p : assumption.placements) {
    if (p.unit < 0 || p.unit >= static_cast<int>(out.rules->roster.size()) || out.rules->roster[p.unit].side != enemy) {
      throw RuleError("belief placement must name an enemy roster unit");
    }
    const std::string& uid = out.rules->unit_id(p.unit);
    if (out.find(p.unit) || !placed.insert(p.unit).second) {
      throw RuleError("belief placement for '" + uid + "' collides with a known unit");
    }
    if (!out.map().passable(p.pos)) throw RuleError("belief placement for '" + uid + "' is on an impassable or off-map hex");
    if (out.unit_at(p.pos)) throw RuleError("belief placement for '" + uid + "' collides with a known unit's hex");
    const int type = out.rules->roster[p.unit].type;
    if (p.strength < 1 || p.strength > out.rules->doc.unit_types[type].max_strength) {
      throw RuleError("belief placement for '" + uid + "' has invalid strength");
    }
    Unit u;
    u.id = p.unit;
    u.side = enemy;
    u.type = type;
    u.pos = p.pos;
    u.strength = p.strength;
    auto it = std::lower_bound(out.units.begin(), out.units.end(), u.id, [](const Unit& a, int key) { return a.id < key; });
    out.units.insert(it, u);
  }
  out.terminal = check_terminal(out);
  return out;
}

RunConfig register_policy(RunConfig config, Side side, const std::vector<int>& units, Policy policy) {
  if (!config.rules) throw RuleError("run configuration has no rules");
  std::set<int> taken;
  for (const auto& reg : config.registrations) taken.insert(reg.units.begin(), reg.units.end());
  std::set<int> fresh;
  for (int u : units) {
    if (u < 0 || u >= static_cast<int>(config.rules->roster.size()) || config.rules->roster[u].side != side) {
      throw RuleError("registered unit does not belong to side " + std::string(side_name(side)));
    }
    if (taken.contains(u) || !fresh.insert(u).second) {
      throw RuleError("unit '" + config.rules->unit_id(u) + "' already has a registered policy");
    }
  }
  config.registrations.push_back({side, std::vector<int>(fresh.begin(), fresh.end()), std::move(policy)});
  return config;
}

void advance(GameState& state, const RunConfig& config) {
  if (is_command_phase(state)) {
    std::array<GlobalAction, 2> actions;
    for (const auto& reg : config.registrations) {
      const Observation obs = observe(state, reg.side, config.level);
      const GlobalAction proposed = reg.policy.decide(obs);
      for (const auto& cmd : proposed.orders) {
        if (std::ranges::binary_search(reg.units, cmd.unit) && state.find(cmd.unit)) {
          actions[side_index(reg.side)].set(cmd.unit, cmd.order);
        }
      }
    }
    for (Side s : {Side::Blue, Side::Red}) apply_orders(state, s, actions[side_index(s)]);
  }
  step(state);
}

SpaceDescriptors describe_spaces(const GameState& state, Side side) {
  SpaceDescriptors d;
  for (const Unit& u : state.units) {
    if (u.side != side) continue;
    UnitActionDescriptor ud;
    ud.unit = u.id;
    ud.id = state.rules->unit_id(u.id);
    for (const UnitOrder& o : legal_orders(state, u.id)) {
      ++ud.order_count;
      ++ud.kinds[o.kind];
    }
    d.actions.joint_action_count *= ud.order_count;
    d.actions.units.push_back(std::move(ud));
  }
  const int w = state.map().width();
  const int h = state.map().height();
  const std::string grid = std::to_string(w) + "x" + std::to_string(h);
  d.observations.fields = {
      {"side", "enum{blue,red}", "scalar"},
      {"tick", "int", "scalar"},
      {"level", "enum{full,fog}", "scalar"},
      {"terrain", "enum{clear,woods,urban,hill,water}", grid},
      {"objectives", "record(side,q,r,weight)", "list"},
      {"own_units", "record(id,type,q,r,strength,mp,order,stance)", "list"},
      {"contacts", "record(id,type,q,r,last_seen_tick,last_seen_strength,staleness)", "list"},
      {"destroyed_enemies", "id", "list"},
      {"score", "record(objectives_held,inflicted,suffered,mp_expended)[2]", "fixed"},
  };
  return d;
}

}  // namespace wargame
