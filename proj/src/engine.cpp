#include "wargame/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "wargame/errors.hpp"
#include "wargame/rng.hpp"

namespace wargame {

std::string_view order_kind_name(OrderKind k) {
  switch (k) {
    case OrderKind::Hold: return "hold";
    case OrderKind::Move: return "move";
    case OrderKind::Attack: return "attack";
    case OrderKind::Scout: return "scout";
  }
  return "hold";
}

UnitOrder UnitOrder::move(std::span<const HexCoord> path) {
  if (path.empty() || path.size() > kMaxWaypoints) {
    throw RuleError("move order needs 1.." + std::to_string(kMaxWaypoints) + " waypoints, got " +
                    std::to_string(path.size()));
  }
  UnitOrder o;
  o.kind = OrderKind::Move;
  o.waypoint_count = static_cast<std::uint8_t>(path.size());
  std::copy(path.begin(), path.end(), o.waypoints.begin());
  return o;
}

UnitOrder UnitOrder::attack(int target_unit) {
  UnitOrder o;
  o.kind = OrderKind::Attack;
  o.target = target_unit;
  return o;
}

UnitOrder UnitOrder::scout(HexCoord anchor, int radius) {
  UnitOrder o;
  o.kind = OrderKind::Scout;
  o.anchor = anchor;
  o.radius = radius;
  return o;
}

bool UnitOrder::operator==(const UnitOrder& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case OrderKind::Hold: return true;
    case OrderKind::Move: return std::ranges::equal(path(), o.path());
    case OrderKind::Attack: return target == o.target;
    case OrderKind::Scout: return anchor == o.anchor && radius == o.radius;
  }
  return false;
}

void GlobalAction::set(int unit, const UnitOrder& order) {
  auto it = std::lower_bound(orders.begin(), orders.end(), unit,
                             [](const UnitCommand& c, int key) { return c.unit < key; });
  if (it != orders.end() && it->unit == unit) {
    it->order = order;
  } else {
    orders.insert(it, UnitCommand{unit, order});
  }
}

const UnitOrder* GlobalAction::find(int unit) const {
  auto it = std::lower_bound(orders.begin(), orders.end(), unit,
                             [](const UnitCommand& c, int key) { return c.unit < key; });
  return (it != orders.end() && it->unit == unit) ? &it->order : nullptr;
}

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::TickLimit: return "tickLimit";
    case Termination::EliminationBlue: return "eliminationBlue";
    case Termination::EliminationRed: return "eliminationRed";
  }
  return "tickLimit";
}

std::optional<Termination> parse_termination(std::string_view s) {
  for (Termination t : {Termination::TickLimit, Termination::EliminationBlue, Termination::EliminationRed}) {
    if (termination_name(t) == s) return t;
  }
  return std::nullopt;
}

const Unit* GameState::find(int unit) const {
  auto it = std::lower_bound(units.begin(), units.end(), unit, [](const Unit& u, int key) { return u.id < key; });
  return (it != units.end() && it->id == unit) ? &*it : nullptr;
}

Unit* GameState::find(int unit) {
  return const_cast<Unit*>(static_cast<const GameState&>(*this).find(unit));
}

const Unit* GameState::unit_at(HexCoord h) const {
  for (const Unit& u : units) {
    if (u.pos == h) return &u;
  }
  return nullptr;
}

namespace {

void refresh_full_contacts(GameState& s) {
  for (const Unit& u : s.units) {
    s.contacts[side_index(opponent(u.side))][u.id] = {true, u.pos, s.tick, u.strength};
  }
}

std::uint64_t uniform_to_bits(double u) {
  return static_cast<std::uint64_t>(u * 0x1.0p53) << 11;
}

void log_event(GameState& s, const ChanceEvent& ev) {
  if (s.record_chance) s.chance_log.push_back(ev);
}

// Draws one chance outcome. In replay mode the recorded outcome is used
// instead of the generator, and the generator state is advanced as if drawn.
template <typename Resolve>
int chance(GameState& s, ChancePurpose purpose, int a, int b, Resolve&& resolve) {
  const bool fixed = purpose == ChancePurpose::Combat && s.rules->doc.deterministic_combat;
  ChanceEvent ev;
  ev.tick = s.tick;
  ev.seq = s.chance_seq++;
  ev.purpose = purpose;
  ev.subjects = {a, b};
  if (s.replay) {
    auto& rp = *s.replay;
    if (rp.cursor >= rp.events.size()) {
      throw ReplayError("chance record missing at tick " + std::to_string(s.tick));
    }
    const ChanceEvent& rec = rp.events[rp.cursor++];
    if (rec.tick != s.tick || rec.purpose != purpose || rec.subjects != ev.subjects) {
      if (!rp.first_mismatch_tick) rp.first_mismatch_tick = s.tick;
      throw ReplayError("chance record diverges at tick " + std::to_string(s.tick));
    }
    if (!fixed) s.rng += kSplitMixGamma;
    if (resolve(bits_to_uniform(rec.draw)) != rec.outcome && !rp.first_mismatch_tick) {
      rp.first_mismatch_tick = s.tick;
    }
    ev.draw = rec.draw;
    ev.outcome = rec.outcome;
  } else {
    if (fixed) {
      ev.draw = 1ULL << 63;
    } else {
      s.rng += kSplitMixGamma;
      ev.draw = splitmix_finalize(s.rng);
    }
    ev.outcome = resolve(bits_to_uniform(ev.draw));
  }
  log_event(s, ev);
  return ev.outcome;
}

bool occupied(const GameState& s, HexCoord h) { return s.unit_at(h) != nullptr; }

// Walks along `path` while movement points allow, stopping early on an
// occupied hex or once within `stop_distance` of `dest`.
void walk(GameState& s, Unit& u, const std::vector<HexCoord>& path, HexCoord dest, int stop_distance) {
  const GameMap& map = s.map();
  for (const HexCoord next : path) {
    if (hex_distance(u.pos, dest) <= stop_distance) return;
    if (occupied(s, next)) return;
    const int cost = move_cost(map.terrain(next));
    if (u.mp < cost) return;
    u.mp -= cost;
    u.pos = next;
    s.score.mp_expended[side_index(u.side)] += cost;
  }
}

// Returns false when no path exists.
bool walk_toward(GameState& s, Unit& u, HexCoord dest, int stop_distance) {
  if (hex_distance(u.pos, dest) <= stop_distance) return true;
  if (hex_distance(u.pos, dest) == 1) {
    if (!s.map().passable(dest)) return false;
    walk(s, u, {dest}, dest, stop_distance);
    return true;
  }
  auto path = try_find_path(s.map(), u.pos, dest);
  if (!path) return false;
  walk(s, u, *path, dest, stop_distance);
  return true;
}

void execute_move(GameState& s, Unit& u) {
  UnitOrder& o = u.order;
  auto pop_front = [&o] {
    std::rotate(o.waypoints.begin(), o.waypoints.begin() + 1, o.waypoints.begin() + o.waypoint_count);
    --o.waypoint_count;
  };
  while (o.waypoint_count > 0) {
    const HexCoord wp = o.waypoints[0];
    if (u.pos == wp) {
      pop_front();
      continue;
    }
    if (!walk_toward(s, u, wp, 0)) {
      o = UnitOrder::hold();
      return;
    }
    if (u.pos != wp) return;
  }
  o = UnitOrder::hold();
}

void execute_attack(GameState& s, Unit& u) {
  const int t = u.order.target;
  const Unit* target = s.find(t);
  const auto& contact = s.contacts[side_index(u.side)][t];
  if (!target || (s.fog && !contact.known)) {
    u.order = UnitOrder::hold();
    return;
  }
  const HexCoord ref = currently_spotted(s, u.side, t) ? target->pos : contact.pos;
  if (!walk_toward(s, u, ref, s.type_of(u).range)) u.order = UnitOrder::hold();
}

void execute_scout(GameState& s, Unit& u) {
  const UnitOrder& o = u.order;
  if (hex_distance(u.pos, o.anchor) > o.radius) {
    if (!walk_toward(s, u, o.anchor, o.radius)) u.order = UnitOrder::hold();
    return;
  }
  const int dir = (s.tick / s.ticks_per_command() + u.id) % 6;
  const HexCoord next{u.pos.q + kHexDirections[dir].q, u.pos.r + kHexDirections[dir].r};
  if (hex_distance(next, o.anchor) > o.radius || !s.map().passable(next) || occupied(s, next)) return;
  const int cost = move_cost(s.map().terrain(next));
  if (u.mp < cost) return;
  u.mp -= cost;
  u.pos = next;
  s.score.mp_expended[side_index(u.side)] += cost;
}

void movement_phase(GameState& s) {
  for (Unit& u : s.units) {
    const int mp_cap = std::max(s.type_of(u).mp_per_tick, 2);
    u.mp = std::min(u.mp + s.type_of(u).mp_per_tick, mp_cap);
    switch (u.order.kind) {
      case OrderKind::Hold: break;
      case OrderKind::Move: execute_move(s, u); break;
      case OrderKind::Attack: execute_attack(s, u); break;
      case OrderKind::Scout: execute_scout(s, u); break;
    }
  }
}

void spotting_phase(GameState& s) {
  if (!s.fog) {
    refresh_full_contacts(s);
    return;
  }
  const GameMap& map = s.map();
  for (Side side : {Side::Blue, Side::Red}) {
    auto& table = s.contacts[side_index(side)];
    for (const Unit& obs : s.units) {
      if (obs.side != side) continue;
      const int sight = s.type_of(obs).sight;
      for (const Unit& tgt : s.units) {
        if (tgt.side == side) continue;
        const int d = hex_distance(obs.pos, tgt.pos);
        if (d > sight || !line_of_sight(map, obs.pos, tgt.pos)) continue;
        const double p = spot_probability(d, sight, concealment(map.terrain(tgt.pos)));
        const int seen = chance(s, ChancePurpose::Spotting, obs.id, tgt.id, [p](double u) { return u < p ? 1 : 0; });
        if (seen) table[tgt.id] = {true, tgt.pos, s.tick, tgt.strength};
      }
    }
  }
}

int choose_target(const GameState& s, const Unit& a) {
  const int range = s.type_of(a).range;
  if (a.order.kind == OrderKind::Attack) {
    const Unit* t = s.find(a.order.target);
    if (t && currently_spotted(s, a.side, t->id) && hex_distance(a.pos, t->pos) <= range) return t->id;
  }
  if (a.stance != Stance::Engage) return -1;
  int best = -1;
  int best_d = range + 1;
  for (const Unit& e : s.units) {
    if (e.side == a.side || !currently_spotted(s, a.side, e.id)) continue;
    const int d = hex_distance(a.pos, e.pos);
    if (d < best_d) {
      best_d = d;
      best = e.id;
    }
  }
  return best;
}

void remove_destroyed(GameState& s) {
  for (const Unit& u : s.units) {
    if (u.strength <= 0) s.contacts[side_index(opponent(u.side))][u.id] = ContactEntry{};
  }
  std::erase_if(s.units, [](const Unit& u) { return u.strength <= 0; });
}

void apply_loss(GameState& s, Unit& d, int loss) {
  const int actual = std::min(loss, d.strength);
  d.strength -= actual;
  s.score.suffered[side_index(d.side)] += actual;
  s.score.inflicted[side_index(opponent(d.side))] += actual;
}

int combat_outcome(const GameState& s, const Unit& a, const Unit& d, double u) {
  const double p = hit_probability(s.type_of(a).attack, s.type_of(d).defense, combat_modifier(s.map().terrain(d.pos)));
  return std::min(d.strength, binomial_inverse_cdf(a.strength, p, u));
}

void combat_phase(GameState& s) {
  // Targets and casualties are fixed from pre-resolution strengths; losses
  // are applied together afterwards.
  std::vector<std::pair<std::size_t, int>> hits;
  for (const Unit& a : s.units) {
    if (a.strength <= 0) continue;
    const int t = choose_target(s, a);
    if (t < 0) continue;
    const Unit& d = *s.find(t);
    const int casualties =
        chance(s, ChancePurpose::Combat, a.id, d.id, [&](double u) { return combat_outcome(s, a, d, u); });
    if (casualties > 0) hits.emplace_back(static_cast<std::size_t>(&d - s.units.data()), casualties);
  }
  if (hits.empty()) return;
  std::vector<int> loss(s.units.size(), 0);
  for (const auto& [idx, c] : hits) loss[idx] += c;
  for (std::size_t i = 0; i < s.units.size(); ++i) {
    if (loss[i] > 0) apply_loss(s, s.units[i], loss[i]);
  }
  remove_destroyed(s);
}

void scoring_phase(GameState& s) {
  for (const Objective& o : s.rules->doc.objectives) {
    const Unit* u = s.unit_at(o.pos);
    if (u && u->side == o.side) s.score.objectives_held[side_index(o.side)] += o.weight;
  }
}

struct Hasher {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void byte(std::uint8_t b) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(std::int32_t v) {
    const auto u = static_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) byte(static_cast<std::uint8_t>(u >> (8 * i)));
  }
  void str(std::string_view s) {
    i32(static_cast<std::int32_t>(s.size()));
    for (char c : s) byte(static_cast<std::uint8_t>(c));
  }
  void hex(HexCoord c) {
    i32(c.q);
    i32(c.r);
  }
};

}  // namespace

GameState instantiate(std::shared_ptr<const Rules> rules, std::uint64_t seed, InstantiateOptions options) {
  GameState s;
  s.rules = std::move(rules);
  s.fog = options.fog;
  s.rng = mix_seed(seed);
  const auto& roster = s.rules->roster;
  s.units.reserve(roster.size());
  for (int i = 0; i < static_cast<int>(roster.size()); ++i) {
    const auto& e = roster[i];
    Unit u;
    u.id = i;
    u.side = e.side;
    u.type = e.type;
    u.pos = e.start;
    u.strength = e.start_strength;
    s.units.push_back(u);
  }
  for (auto& table : s.contacts) table.assign(roster.size(), ContactEntry{});
  if (!s.fog) refresh_full_contacts(s);
  s.terminal = check_terminal(s);
  return s;
}

GameState instantiate(const ScenarioDoc& scenario, std::uint64_t seed, InstantiateOptions options) {
  return instantiate(compile_rules(scenario), seed, options);
}

void step(GameState& s) {
  if (s.terminal) throw RuleError("cannot step a terminal state");
  ++s.tick;
  movement_phase(s);
  spotting_phase(s);
  combat_phase(s);
  scoring_phase(s);
  s.terminal = check_terminal(s);
}

bool is_command_phase(const GameState& s) { return !s.terminal && s.tick % s.ticks_per_command() == 0; }

void check_order(const GameState& s, Side side, const Unit& unit, const UnitOrder& order) {
  const GameMap& map = s.map();
  const std::string& uid = s.rules->unit_id(unit.id);
  switch (order.kind) {
    case OrderKind::Hold: return;
    case OrderKind::Move:
      if (order.waypoint_count < 1 || order.waypoint_count > kMaxWaypoints) {
        throw RuleError("move order for '" + uid + "' must have 1..3 waypoints");
      }
      for (const HexCoord h : order.path()) {
        if (!map.passable(h)) throw RuleError("move order for '" + uid + "' targets an impassable or off-map hex");
      }
      return;
    case OrderKind::Attack: {
      const int t = order.target;
      if (t < 0 || t >= static_cast<int>(s.rules->roster.size()) || s.rules->roster[t].side == side) {
        throw RuleError("attack order for '" + uid + "' names a non-enemy unit");
      }
      const bool known = s.fog ? s.contacts[side_index(side)][t].known : s.find(t) != nullptr;
      if (!known) throw RuleError("attack order for '" + uid + "' names an enemy that is not a known contact");
      return;
    }
    case OrderKind::Scout:
      if (order.radius < 1) throw RuleError("scout order for '" + uid + "' needs radius >= 1");
      if (!map.in_bounds(order.anchor)) throw RuleError("scout order for '" + uid + "' anchored off-map");
      return;
  }
}

void apply_orders(GameState& s, Side side, const GlobalAction& action) {
  if (s.terminal) throw RuleError("cannot issue orders in a terminal state");
  if (!is_command_phase(s)) {
    throw RuleError("orders may only be issued in a command phase (tick " + std::to_string(s.tick) + ")");
  }
  for (const auto& cmd : action.orders) {
    const Unit* u = s.find(cmd.unit);
    if (!u) throw RuleError("order for dead or unknown unit " + std::to_string(cmd.unit));
    if (u->side != side) throw RuleError("order for enemy unit '" + s.rules->unit_id(cmd.unit) + "'");
    check_order(s, side, *u, cmd.order);
  }
  for (const auto& cmd : action.orders) s.find(cmd.unit)->order = cmd.order;
}

GameState copy_state(const GameState& state) { return state; }

std::vector<UnitOrder> enumerate_orders(const Rules& rules, const Unit& unit, std::span<const KnownContact> contacts) {
  const GameMap& map = rules.map();
  const int range = rules.doc.unit_types[unit.type].range;
  std::vector<UnitOrder> out;
  out.reserve(8 + contacts.size() + rules.doc.objectives.size());
  out.push_back(UnitOrder::hold());
  for (const auto& c : contacts) {
    if (hex_distance(unit.pos, c.pos) <= range) out.push_back(UnitOrder::attack(c.unit));
  }
  for (const HexCoord n : hex_neighbors(unit.pos)) {
    if (map.passable(n)) out.push_back(UnitOrder::move_to(n));
  }
  for (const Objective& o : rules.doc.objectives) {
    if (o.pos == unit.pos || hex_distance(o.pos, unit.pos) == 1) continue;
    const UnitOrder m = UnitOrder::move_to(o.pos);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  out.push_back(UnitOrder::scout(unit.pos, 2));
  return out;
}

std::vector<UnitOrder> legal_orders(const GameState& s, int unit) {
  const Unit* u = s.find(unit);
  if (!u) throw RuleError("legal_orders: unit " + std::to_string(unit) + " is dead or unknown");
  std::vector<KnownContact> contacts;
  const auto& table = s.contacts[side_index(u->side)];
  for (int e : s.rules->side_roster[side_index(opponent(u->side))]) {
    if (s.fog) {
      if (table[e].known) contacts.push_back({e, table[e].pos});
    } else if (const Unit* eu = s.find(e)) {
      contacts.push_back({e, eu->pos});
    }
  }
  return enumerate_orders(*s.rules, *u, contacts);
}

bool line_of_sight(const GameMap& map, HexCoord from, HexCoord to) {
  if (hex_distance(from, to) <= 1) return true;
  const bool observer_on_hill = map.in_bounds(from) && map.terrain(from) == Terrain::Hill;
  const auto line = hex_line(from, to);
  for (std::size_t i = 1; i + 1 < line.size(); ++i) {
    if (!map.in_bounds(line[i])) continue;
    const Terrain t = map.terrain(line[i]);
    if (t == Terrain::Woods || t == Terrain::Urban) return false;
    if (t == Terrain::Hill && !observer_on_hill) return false;
  }
  return true;
}

double hit_probability(int attack, int defense, int terrain_modifier) {
  return std::clamp(0.5 + 0.1 * (attack - defense + terrain_modifier), 0.05, 0.95);
}

double spot_probability(int distance, int sight, double target_concealment) {
  return 0.9 * (1.0 - static_cast<double>(distance) / (sight + 1)) * target_concealment;
}

int binomial_inverse_cdf(int n, double p, double u) {
  if (n <= 0) return 0;
  double pmf = std::pow(1.0 - p, n);
  double cdf = pmf;
  int k = 0;
  while (cdf <= u && k < n) {
    pmf *= (static_cast<double>(n - k) / (k + 1)) * (p / (1.0 - p));
    cdf += pmf;
    ++k;
  }
  return k;
}

bool currently_spotted(const GameState& s, Side observer_side, int enemy) {
  if (!s.fog) return s.find(enemy) != nullptr;
  const auto& c = s.contacts[side_index(observer_side)][enemy];
  return c.known && c.tick == s.tick;
}

int resolve_combat(GameState& s, int attacker, int defender, double uniform) {
  Unit* a = s.find(attacker);
  Unit* d = s.find(defender);
  if (!a || a->strength <= 0) throw RuleError("attacker must be alive with strength > 0");
  if (!d || d->side == a->side) throw RuleError("defender must be a live enemy unit");
  if (!currently_spotted(s, a->side, defender)) throw RuleError("defender is not spotted by the attacking side");
  if (hex_distance(a->pos, d->pos) > s.type_of(*a).range) throw RuleError("defender is beyond weapon range");
  if (!(uniform >= 0.0 && uniform < 1.0)) throw RuleError("uniform draw must lie in [0,1)");
  const int casualties = combat_outcome(s, *a, *d, uniform);
  log_event(s, {s.tick, s.chance_seq++, ChancePurpose::Combat, {attacker, defender}, uniform_to_bits(uniform), casualties});
  apply_loss(s, *d, casualties);
  remove_destroyed(s);
  s.terminal = check_terminal(s);
  return casualties;
}

bool spot_attempt(GameState& s, int observer, int target, double uniform) {
  const Unit* o = s.find(observer);
  const Unit* t = s.find(target);
  if (!o || !t || o->side == t->side) throw RuleError("spot attempt needs a live observer and a live enemy target");
  const int d = hex_distance(o->pos, t->pos);
  const int sight = s.type_of(*o).sight;
  if (d > sight) throw RuleError("target beyond sight range");
  if (!line_of_sight(s.map(), o->pos, t->pos)) throw RuleError("line of sight blocked");
  if (!(uniform >= 0.0 && uniform < 1.0)) throw RuleError("uniform draw must lie in [0,1)");
  const bool seen = uniform < spot_probability(d, sight, concealment(s.map().terrain(t->pos)));
  log_event(s, {s.tick, s.chance_seq++, ChancePurpose::Spotting, {observer, target}, uniform_to_bits(uniform), seen ? 1 : 0});
  if (seen) s.contacts[side_index(o->side)][target] = {true, t->pos, s.tick, t->strength};
  return seen;
}

double victory_points(const Rules& rules, const ScoreVector& score, Side side) {
  const int i = side_index(side);
  const VictoryWeights& w = rules.doc.victory[i];
  return w.hold * score.objectives_held[i] + w.inflicted * static_cast<double>(score.inflicted[i]) +
         w.suffered * static_cast<double>(score.suffered[i]) + w.moved * static_cast<double>(score.mp_expended[i]);
}

ScoreReport score_state(const GameState& s) {
  ScoreReport r;
  r.score = s.score;
  r.vp = {victory_points(*s.rules, s.score, Side::Blue), victory_points(*s.rules, s.score, Side::Red)};
  return r;
}

int total_strength(const GameState& s, Side side) {
  int total = 0;
  for (const Unit& u : s.units) {
    if (u.side == side) total += u.strength;
  }
  return total;
}

std::optional<Termination> check_terminal(const GameState& s) {
  if (total_strength(s, Side::Blue) == 0) return Termination::EliminationBlue;
  if (total_strength(s, Side::Red) == 0) return Termination::EliminationRed;
  if (s.tick >= s.rules->doc.max_ticks) return Termination::TickLimit;
  return std::nullopt;
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  Hasher h;
  for (auto b : bytes) h.byte(b);
  return h.h;
}

std::uint64_t state_hash(const GameState& s) {
  Hasher h;
  h.i32(static_cast<std::int32_t>(s.units.size()));
  for (const Unit& u : s.units) {
    h.str(s.rules->unit_id(u.id));
    h.byte(static_cast<std::uint8_t>(u.side));
    h.str(s.type_of(u).name);
    h.hex(u.pos);
    h.i32(u.strength);
    h.i32(u.mp);
    h.byte(static_cast<std::uint8_t>(u.order.kind));
    h.byte(u.order.waypoint_count);
    for (const HexCoord w : u.order.path()) h.hex(w);
    h.i32(u.order.kind == OrderKind::Attack ? u.order.target : -1);
    if (u.order.kind == OrderKind::Scout) {
      h.hex(u.order.anchor);
      h.i32(u.order.radius);
    }
    h.byte(static_cast<std::uint8_t>(u.stance));
  }
  for (int i = 0; i < 2; ++i) h.u64(std::bit_cast<std::uint64_t>(s.score.objectives_held[i]));
  for (int i = 0; i < 2; ++i) h.u64(static_cast<std::uint64_t>(s.score.inflicted[i]));
  for (int i = 0; i < 2; ++i) h.u64(static_cast<std::uint64_t>(s.score.suffered[i]));
  for (int i = 0; i < 2; ++i) h.u64(static_cast<std::uint64_t>(s.score.mp_expended[i]));
  h.u64(static_cast<std::uint64_t>(s.tick));
  h.u64(s.rng);
  for (const auto& table : s.contacts) {
    for (std::size_t e = 0; e < table.size(); ++e) {
      if (!table[e].known) continue;
      h.i32(static_cast<std::int32_t>(e));
      h.hex(table[e].pos);
      h.i32(table[e].tick);
      h.i32(table[e].strength);
    }
    h.byte(0xFF);
  }
  h.byte(s.terminal ? static_cast<std::uint8_t>(*s.terminal) : 0);
  h.byte(s.fog ? 1 : 0);
  return h.h;
}

double draw_uniform(GameState& s) {
  auto [u, next] = wargame::draw_uniform(s.rng);
  s.rng = next;
  return u;
}

}  // namespace wargame
