#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "wargame/interface.hpp"

namespace wargame {

// One hypothesis about the enemy units a side cannot currently see. Units that
// are currently spotted or known destroyed are not part of a particle.
struct Particle {
  std::vector<Placement> force;  // ascending unit
  double weight = 0.0;
};

struct ParticleSet {
  Side side = Side::Blue;
  std::shared_ptr<const Rules> rules;
  int tick = 0;                 // tick of the last observation absorbed
  std::vector<int> hidden;      // enemy roster indices tracked by every particle
  std::vector<Particle> particles;
  bool degenerate = false;      // last update contradicted every particle

  std::size_t size() const { return particles.size(); }
  double effective_sample_size() const;
};

// Enemy units a side cannot currently see (roster minus destroyed minus
// contacts with staleness 0), ascending.
std::vector<int> hidden_enemies(const Observation& obs);

// Draws n particles from the scenario prior: declared enemy roster, positions
// uniform over free passable hexes (stale contacts start at their last-seen
// hex). Throws RuleError when n < 1.
ParticleSet init_particles(const Observation& obs, const Rules& prior, int n, std::uint64_t seed);

// Absorbs a newer observation: random-walk motion per command cycle elapsed,
// hard rejection of contradicted hypotheses, non-detection likelihood for the
// ticks elapsed, normalisation and systematic resampling when ESS < n/2.
ParticleSet update_particles(const ParticleSet& set, const Observation& obs, std::uint64_t seed);

// False when a hypothesised unit sits on a hex the observation shows to be
// occupied by a known unit, or two hypothesised units share a hex.
bool particle_consistent(const Particle& particle, const Observation& obs);

std::size_t sample_particle(const ParticleSet& set, std::uint64_t seed);

// One perfect-information world consistent with the side's knowledge: the
// sampled particle injected into `state`.
GameState sample_determinization(const ParticleSet& set, const GameState& state, std::uint64_t seed);

// Placements for every hidden enemy of `state` from the side's point of view,
// using `hint` where it is still valid and otherwise the last-seen hex (or the
// scenario start hex), moved to the nearest free hex on collisions.
BeliefAssumption complete_assumption(const GameState& state, Side side, const std::vector<Placement>& hint = {});

// A planning state built only from what the observation reveals: own units,
// contacts at their last-seen hexes (hidden ones from `assumption`), score and
// tick. The opponent's contact table starts empty.
GameState state_from_observation(const Observation& obs, const BeliefAssumption& assumption, std::uint64_t seed);
GameState state_from_observation(const Observation& obs, std::uint64_t seed);

}  // namespace wargame
