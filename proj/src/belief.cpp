#include "wargame/belief.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "wargame/errors.hpp"
#include "wargame/rng.hpp"

namespace wargame {

double ParticleSet::effective_sample_size() const {
  double sum = 0.0, sq = 0.0;
  for (const Particle& p : particles) {
    sum += p.weight;
    sq += p.weight * p.weight;
  }
  return sq > 0.0 ? sum * sum / sq : 0.0;
}

std::vector<int> hidden_enemies(const Observation& obs) {
  std::vector<int> out;
  for (int e : obs.rules->side_roster[side_index(opponent(obs.side))]) {
    if (std::ranges::binary_search(obs.destroyed_enemies, e)) continue;
    const Contact* c = obs.contact(e);
    if (c && c->staleness == 0) continue;
    out.push_back(e);
  }
  return out;
}

namespace {

// Hexes whose occupant the observation reveals: own units and fresh contacts.
std::set<HexCoord> known_occupied(const Observation& obs) {
  std::set<HexCoord> occ;
  for (const Unit& u : obs.own_units) occ.insert(u.pos);
  for (const Contact& c : obs.contacts) {
    if (c.staleness == 0) occ.insert(c.last_seen_pos);
  }
  return occ;
}

std::vector<HexCoord> free_hexes(const GameMap& map, const std::set<HexCoord>& occupied) {
  std::vector<HexCoord> out;
  for (int i = 0; i < map.cell_count(); ++i) {
    const HexCoord h = map.coord(i);
    if (map.passable(h) && !occupied.contains(h)) out.push_back(h);
  }
  return out;
}

// Nearest passable hex to `origin` not in `blocked`, ordered by (distance, q, r).
std::optional<HexCoord> nearest_free(const GameMap& map, HexCoord origin, const std::set<HexCoord>& blocked) {
  std::optional<HexCoord> best;
  int best_d = 0;
  for (int i = 0; i < map.cell_count(); ++i) {
    const HexCoord h = map.coord(i);
    if (!map.passable(h) || blocked.contains(h)) continue;
    const int d = hex_distance(origin, h);
    if (!best || d < best_d || (d == best_d && h < *best)) {
      best = h;
      best_d = d;
    }
  }
  return best;
}

Placement place_hidden(const Observation& obs, const Rules& rules, int unit, const std::vector<HexCoord>& candidates,
                       std::set<HexCoord>& taken, SplitMix64& rng) {
  Placement p;
  p.unit = unit;
  p.strength = rules.roster[unit].start_strength;
  const Contact* c = obs.contact(unit);
  if (c) {
    p.strength = c->last_seen_strength;
    if (!taken.contains(c->last_seen_pos) && rules.map().passable(c->last_seen_pos)) {
      p.pos = c->last_seen_pos;
      taken.insert(p.pos);
      return p;
    }
  }
  if (candidates.empty()) throw RuleError("no free hex left for hidden enemy units");
  for (int attempt = 0; attempt < 64; ++attempt) {
    const HexCoord h = candidates[rng.below(candidates.size())];
    if (!taken.contains(h)) {
      p.pos = h;
      taken.insert(h);
      return p;
    }
  }
  std::vector<HexCoord> left;
  for (HexCoord h : candidates) {
    if (!taken.contains(h)) left.push_back(h);
  }
  if (left.empty()) throw RuleError("no free hex left for hidden enemy units");
  p.pos = left[rng.below(left.size())];
  taken.insert(p.pos);
  return p;
}

double non_detection_likelihood(const Particle& particle, const Observation& obs, int ticks) {
  const GameMap& map = obs.map();
  double like = 1.0;
  for (const Placement& pl : particle.force) {
    const double conceal = concealment(map.terrain(pl.pos));
    for (const Unit& o : obs.own_units) {
      const int sight = obs.rules->doc.unit_types[o.type].sight;
      const int d = hex_distance(o.pos, pl.pos);
      if (d > sight || !line_of_sight(map, o.pos, pl.pos)) continue;
      like *= std::pow(1.0 - spot_probability(d, sight, conceal), ticks);
    }
  }
  return like;
}

void normalize(std::vector<Particle>& particles) {
  double total = 0.0;
  for (const Particle& p : particles) total += p.weight;
  for (Particle& p : particles) p.weight /= total;
}

std::vector<Particle> systematic_resample(const std::vector<Particle>& particles, SplitMix64& rng) {
  const std::size_t n = particles.size();
  std::vector<Particle> out;
  out.reserve(n);
  const double step = 1.0 / static_cast<double>(n);
  double u = rng.uniform() * step;
  double cumulative = particles[0].weight;
  std::size_t i = 0;
  for (std::size_t k = 0; k < n; ++k) {
    while (u > cumulative && i + 1 < n) cumulative += particles[++i].weight;
    out.push_back(particles[i]);
    out.back().weight = step;
    u += step;
  }
  return out;
}

}  // namespace

bool particle_consistent(const Particle& particle, const Observation& obs) {
  const auto occupied = known_occupied(obs);
  std::set<HexCoord> seen;
  for (const Placement& p : particle.force) {
    if (!obs.map().passable(p.pos) || occupied.contains(p.pos) || !seen.insert(p.pos).second) return false;
  }
  return true;
}

ParticleSet init_particles(const Observation& obs, const Rules& prior, int n, std::uint64_t seed) {
  if (n < 1) throw RuleError("particle count must be at least 1");
  ParticleSet set;
  set.side = obs.side;
  set.rules = obs.rules;
  set.tick = obs.tick;
  set.hidden = hidden_enemies(obs);
  const auto occupied = known_occupied(obs);
  const auto candidates = free_hexes(prior.map(), occupied);
  SplitMix64 rng(mix_seed(seed));
  set.particles.resize(static_cast<std::size_t>(n));
  for (Particle& p : set.particles) {
    p.weight = 1.0 / n;
    std::set<HexCoord> taken = occupied;
    for (int unit : set.hidden) p.force.push_back(place_hidden(obs, prior, unit, candidates, taken, rng));
  }
  return set;
}

ParticleSet update_particles(const ParticleSet& set, const Observation& obs, std::uint64_t seed) {
  ParticleSet out;
  out.side = set.side;
  out.rules = set.rules ? set.rules : obs.rules;
  out.tick = std::max(set.tick, obs.tick);
  out.hidden = hidden_enemies(obs);
  const int n = static_cast<int>(set.particles.size());
  if (n == 0) return init_particles(obs, *out.rules, 1, seed);

  const int ticks = std::max(0, obs.tick - set.tick);
  const int k = obs.rules->doc.ticks_per_command;
  const int cycles = ticks > 0 ? obs.tick / k - set.tick / k : 0;
  const GameMap& map = obs.map();
  const auto occupied = known_occupied(obs);
  const auto candidates = free_hexes(map, occupied);
  SplitMix64 rng(mix_seed(seed));

  out.particles = set.particles;
  for (Particle& p : out.particles) {
    std::erase_if(p.force, [&](const Placement& pl) { return !std::ranges::binary_search(out.hidden, pl.unit); });
    for (int c = 0; c < cycles; ++c) {
      for (Placement& pl : p.force) {
        if (rng.uniform() >= 0.5) continue;
        std::array<HexCoord, 6> options;
        int count = 0;
        for (HexCoord h : hex_neighbors(pl.pos)) {
          if (map.passable(h)) options[count++] = h;
        }
        if (count == 0) continue;
        const HexCoord dest = options[rng.below_int(count)];
        const bool clash = std::ranges::any_of(p.force, [&](const Placement& o) { return o.pos == dest; });
        if (!clash) pl.pos = dest;
      }
    }
    if (p.force.size() < out.hidden.size()) {
      std::set<HexCoord> taken = occupied;
      for (const Placement& pl : p.force) taken.insert(pl.pos);
      for (int unit : out.hidden) {
        const bool tracked = std::ranges::any_of(p.force, [&](const Placement& pl) { return pl.unit == unit; });
        if (!tracked) p.force.push_back(place_hidden(obs, *out.rules, unit, candidates, taken, rng));
      }
      std::ranges::sort(p.force, {}, &Placement::unit);
    }
    if (!particle_consistent(p, obs)) {
      p.weight = 0.0;
    } else if (ticks > 0) {
      p.weight *= non_detection_likelihood(p, obs, ticks);
    }
  }

  double total = 0.0;
  for (const Particle& p : out.particles) total += p.weight;
  if (!(total > 0.0)) {
    ParticleSet fresh = init_particles(obs, *out.rules, n, derive_seed(seed, 1));
    fresh.degenerate = true;
    return fresh;
  }
  normalize(out.particles);
  if (out.effective_sample_size() < 0.5 * n) out.particles = systematic_resample(out.particles, rng);
  return out;
}

std::size_t sample_particle(const ParticleSet& set, std::uint64_t seed) {
  if (set.particles.empty()) throw RuleError("cannot sample from an empty particle set");
  double total = 0.0;
  for (const Particle& p : set.particles) total += p.weight;
  SplitMix64 rng(mix_seed(seed));
  if (!(total > 0.0)) return rng.below(set.particles.size());
  const double target = rng.uniform() * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < set.particles.size(); ++i) {
    cumulative += set.particles[i].weight;
    if (target < cumulative) return i;
  }
  return set.particles.size() - 1;
}

namespace {

BeliefAssumption assume(const GameState& state, Side side, const std::vector<int>& hidden,
                        const std::vector<Placement>& hint) {
  std::set<HexCoord> blocked;
  for (const Unit& u : state.units) {
    if (u.side == side || currently_spotted(state, side, u.id)) blocked.insert(u.pos);
  }
  const auto& table = state.contacts[side_index(side)];
  BeliefAssumption out;
  for (int e : hidden) {
    Placement p;
    p.unit = e;
    p.pos = state.rules->roster[e].start;
    p.strength = state.rules->roster[e].start_strength;
    if (table[e].known) {
      p.pos = table[e].pos;
      p.strength = table[e].strength;
    }
    for (const Placement& h : hint) {
      if (h.unit == e) {
        p.pos = h.pos;
        p.strength = h.strength;
      }
    }
    const int max_str = state.rules->type_of(e).max_strength;
    p.strength = std::clamp(p.strength, 1, max_str);
    if (!state.map().passable(p.pos) || blocked.contains(p.pos)) {
      auto h = nearest_free(state.map(), p.pos, blocked);
      if (!h) throw RuleError("no free hex left for hidden enemy units");
      p.pos = *h;
    }
    blocked.insert(p.pos);
    out.placements.push_back(p);
  }
  return out;
}

}  // namespace

BeliefAssumption complete_assumption(const GameState& state, Side side, const std::vector<Placement>& hint) {
  std::vector<int> hidden;
  for (const Unit& u : state.units) {
    if (u.side != side && !currently_spotted(state, side, u.id)) hidden.push_back(u.id);
  }
  return assume(state, side, hidden, hint);
}

GameState sample_determinization(const ParticleSet& set, const GameState& state, std::uint64_t seed) {
  const std::size_t idx = sample_particle(set, seed);
  return inject_belief(state, set.side, complete_assumption(state, set.side, set.particles[idx].force));
}

GameState state_from_observation(const Observation& obs, const BeliefAssumption& assumption, std::uint64_t seed) {
  GameState s;
  s.rules = obs.rules;
  s.tick = obs.tick;
  s.score = obs.score;
  s.fog = obs.level == ObservationLevel::Fog;
  s.rng = mix_seed(seed);
  const auto n = obs.rules->roster.size();
  for (auto& table : s.contacts) table.assign(n, ContactEntry{});
  auto& mine = s.contacts[side_index(obs.side)];
  s.units = obs.own_units;
  for (const Contact& c : obs.contacts) {
    mine[c.unit] = {true, c.last_seen_pos, c.last_seen_tick, c.last_seen_strength};
    if (c.staleness != 0) continue;
    Unit u;
    u.id = c.unit;
    u.side = opponent(obs.side);
    u.type = obs.rules->roster[c.unit].type;
    u.pos = c.last_seen_pos;
    u.strength = c.last_seen_strength;
    s.units.push_back(u);
  }
  std::ranges::sort(s.units, {}, &Unit::id);
  if (!s.fog) {
    for (const Unit& u : s.units) s.contacts[side_index(opponent(u.side))][u.id] = {true, u.pos, s.tick, u.strength};
  }
  const BeliefAssumption full = assume(s, obs.side, hidden_enemies(obs), assumption.placements);
  for (const Placement& p : full.placements) {
    Unit u;
    u.id = p.unit;
    u.side = opponent(obs.side);
    u.type = obs.rules->roster[p.unit].type;
    u.pos = p.pos;
    u.strength = p.strength;
    s.units.push_back(u);
  }
  std::ranges::sort(s.units, {}, &Unit::id);
  s.terminal = check_terminal(s);
  return s;
}

GameState state_from_observation(const Observation& obs, std::uint64_t seed) {
  return state_from_observation(obs, BeliefAssumption{}, seed);
}

}  // namespace wargame
